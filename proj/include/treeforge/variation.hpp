// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "treeforge/gp_config.hpp"
#include "treeforge/node_matrix.hpp"
#include "treeforge/operator_set.hpp"
#include "treeforge/rng.hpp"

namespace treeforge {

/// One matrix row with child references local to its block.
struct NodeRow {
    int function{0};
    int left{NoChild};
    int right{NoChild};
    double value{0.0};
};

/// Post-order run of rows forming one subtree; the last row is its root.
using RowBlock = std::vector<NodeRow>;

enum class InitMethod : std::uint8_t { Grow, Full };

/// Limits enforced on every reproduction result.
struct ShapeLimits {
    Index rowCapacity{DefaultRowCapacity};
    int maxDepth{8};
};

[[nodiscard]] inline auto LimitsOf(GpConfig const& cfg) -> ShapeLimits { return {cfg.rowCapacity, cfg.maxDepth}; }

/// Random subtree of the given depth. Full places operators on every level
/// above the leaves; Grow stops early at random but keeps an operator root
/// when depth > 1. Leaves are a variable or a constant with equal probability.
auto GenerateBlock(OperatorSet const& ops, int depth, InitMethod method, double constLow, double constHigh,
    RngStream& rng) -> RowBlock;

/// Random tree placed into a packed matrix of `rows` rows.
auto GenerateTree(OperatorSet const& ops, int depth, InitMethod method, double constLow, double constHigh, Index rows,
    RngStream& rng) -> NodeMatrixd;

/// Copy of the subtree rooted at `row` (m must be post-order packed).
auto ExtractSubtree(NodeMatrixd const& m, Index row) -> RowBlock;

/// Replaces the subtree rooted at `row` with `block`, moving rows and
/// rewriting child references. Returns nullopt when the result would not fit
/// the matrix.
auto SpliceSubtree(NodeMatrixd const& m, Index row, RowBlock const& block) -> std::optional<NodeMatrixd>;

/// Packs a block into an R-row matrix.
auto BlockToMatrix(RowBlock const& block, Index rows) -> NodeMatrixd;

[[nodiscard]] auto WithinLimits(NodeMatrixd const& m, ShapeLimits const& limits) -> bool;

/// Uniformly random active row.
auto RandomActiveRow(NodeMatrixd const& m, RngStream& rng) -> Index;

/// Swaps the subtrees rooted at rowA (in a) and rowB (in b). A child that
/// would break the limits is replaced by a copy of its own parent.
auto CrossoverAt(NodeMatrixd const& a, NodeMatrixd const& b, Index rowA, Index rowB, ShapeLimits const& limits)
    -> std::pair<NodeMatrixd, NodeMatrixd>;

/// Subtree crossover at uniformly chosen nodes.
auto Crossover(NodeMatrixd const& a, NodeMatrixd const& b, ShapeLimits const& limits, RngStream& rng)
    -> std::pair<NodeMatrixd, NodeMatrixd>;

enum class MutationKind : std::uint8_t { OperatorSwap, SubtreeReplace, ConstantJitter, VariableSwap, NodeInsert, NodeDelete };

inline constexpr std::size_t MutationKindCount = 6;

[[nodiscard]] auto IsApplicable(MutationKind kind, NodeMatrixd const& m, OperatorSet const& ops) -> bool;

/// Applies one specific mutation kind. Returns nullopt if the kind does not
/// apply to this tree or the result breaks the limits.
auto MutateWith(MutationKind kind, NodeMatrixd const& m, OperatorSet const& ops, GpConfig const& cfg, RngStream& rng)
    -> std::optional<NodeMatrixd>;

/// Samples an applicable kind by cfg.mutationWeights and applies it. Falls
/// back to an unchanged copy if repeated attempts break the limits.
auto Mutate(NodeMatrixd const& m, OperatorSet const& ops, GpConfig const& cfg, RngStream& rng) -> NodeMatrixd;

} // namespace treeforge

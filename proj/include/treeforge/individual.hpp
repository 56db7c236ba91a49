// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "treeforge/infix.hpp"
#include "treeforge/node_matrix.hpp"
#include "treeforge/operator_set.hpp"

namespace treeforge {

inline constexpr double Unevaluated = std::numeric_limits<double>::infinity();

/// One candidate: one or more trees scored together. Lower fitness is better.
struct Individual {
    std::vector<NodeMatrixd> trees;
    double fitness{Unevaluated};
};

using Population = std::vector<Individual>;

[[nodiscard]] inline auto Complexity(Individual const& ind) -> std::size_t
{
    std::size_t total = 0;
    for (auto const& t : ind.trees) {
        total += Complexity(t);
    }
    return total;
}

/// A single operator set is shared by every tree; otherwise one per tree.
[[nodiscard]] inline auto OpsForTree(std::span<OperatorSet const> ops, std::size_t tree) -> OperatorSet const&
{
    return ops.size() == 1 ? ops.front() : ops[tree];
}

/// Trees rendered with ToInfix and joined with " ; ".
[[nodiscard]] inline auto ToInfix(Individual const& ind, std::span<OperatorSet const> ops, int constPrecision = 4)
    -> std::string
{
    std::string out;
    for (std::size_t i = 0; i < ind.trees.size(); ++i) {
        if (i > 0) {
            out += " ; ";
        }
        out += ToInfix(ind.trees[i], OpsForTree(ops, i), constPrecision);
    }
    return out;
}

/// Strict weak order used for ranking: fitness, then complexity.
[[nodiscard]] inline auto FitterThan(Individual const& a, Individual const& b) -> bool
{
    if (a.fitness != b.fitness) {
        return a.fitness < b.fitness;
    }
    return Complexity(a) < Complexity(b);
}

/// FNV-1a over the active rows of every tree. Equal structure and constants
/// give equal fingerprints on every platform.
[[nodiscard]] inline auto Fingerprint(Individual const& ind) -> std::uint64_t
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (word >> (8 * byte)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    for (auto const& t : ind.trees) {
        auto const rows = t.Rows();
        auto const first = rows - static_cast<Index>(Complexity(t));
        mix(static_cast<std::uint64_t>(rows - first));
        for (Index r = first; r < rows; ++r) {
            mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(t.Function(r))));
            mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(t.Left(r))));
            mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(t.Right(r))));
            mix(std::bit_cast<std::uint64_t>(t.Value(r) == 0.0 ? 0.0 : t.Value(r)));
        }
    }
    return h;
}

} // namespace treeforge

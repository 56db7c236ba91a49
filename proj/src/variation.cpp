// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/variation.hpp"

#include <array>
#include <cmath>
#include <random>

#include "treeforge/error.hpp"

namespace treeforge {

namespace {

auto RandomLeaf(OperatorSet const& ops, double constLow, double constHigh, RngStream& rng) -> NodeRow
{
    if (rng.Bernoulli(0.5)) {
        return {ops.VariableIndex(rng.Index(ops.NumVariables())), NoChild, NoChild, 0.0};
    }
    return {OperatorSet::ConstantIndex, NoChild, NoChild, rng.Uniform(constLow, constHigh)};
}

// appends the subtree and returns the local index of its root
auto Generate(RowBlock& block, OperatorSet const& ops, int depth, InitMethod method, bool root, double constLow,
    double constHigh, RngStream& rng) -> int
{
    auto const operators = ops.Operators();
    bool leaf = depth <= 1 || operators.empty();
    if (!leaf && method == InitMethod::Grow && !root) {
        auto const terminals = static_cast<double>(ops.NumVariables() + 1);
        leaf = rng.Bernoulli(terminals / (terminals + static_cast<double>(operators.size())));
    }
    if (leaf) {
        block.push_back(RandomLeaf(ops, constLow, constHigh, rng));
        return static_cast<int>(block.size()) - 1;
    }
    int const fn = operators[rng.Index(operators.size())];
    int const left = Generate(block, ops, depth - 1, method, false, constLow, constHigh, rng);
    int const right = ops.Arity(fn) == 2 ? Generate(block, ops, depth - 1, method, false, constLow, constHigh, rng) : NoChild;
    block.push_back({fn, left, right, 0.0});
    return static_cast<int>(block.size()) - 1;
}

auto RowsOfKind(NodeMatrixd const& m, OperatorSet const& ops, auto predicate) -> std::vector<Index>
{
    std::vector<Index> rows;
    for (Index r = 0; r < m.Rows(); ++r) {
        if (m.IsActive(r) && predicate(ops.Entry(m.Function(r)))) {
            rows.push_back(r);
        }
    }
    return rows;
}

void RequirePacked(NodeMatrixd const& m)
{
    if (!IsPostOrderPacked(m)) {
        throw ValidationError("reproduction needs a post-order packed matrix (see Canonicalize)");
    }
}

auto IsOperator(OperatorEntry const& e) -> bool { return e.arity > 0; }

template <typename T>
auto Pick(std::vector<T> const& items, RngStream& rng) -> T
{
    return items[rng.Index(items.size())];
}

auto Checked(std::optional<NodeMatrixd> m, ShapeLimits const& limits) -> std::optional<NodeMatrixd>
{
    if (m && !WithinLimits(*m, limits)) {
        return std::nullopt;
    }
    return m;
}

} // namespace

auto GenerateBlock(OperatorSet const& ops, int depth, InitMethod method, double constLow, double constHigh,
    RngStream& rng) -> RowBlock
{
    RowBlock block;
    Generate(block, ops, depth, method, true, constLow, constHigh, rng);
    return block;
}

auto BlockToMatrix(RowBlock const& block, Index rows) -> NodeMatrixd
{
    auto const n = static_cast<Index>(block.size());
    if (n > rows) {
        throw CapacityError(block.size(), static_cast<std::size_t>(rows));
    }
    NodeMatrixd m(rows);
    auto const offset = static_cast<int>(rows - n);
    for (Index j = 0; j < n; ++j) {
        auto const& b = block[static_cast<std::size_t>(j)];
        m.SetRow(offset + j, b.function, b.left == NoChild ? NoChild : b.left + offset,
            b.right == NoChild ? NoChild : b.right + offset, b.value);
    }
    return m;
}

auto GenerateTree(OperatorSet const& ops, int depth, InitMethod method, double constLow, double constHigh, Index rows,
    RngStream& rng) -> NodeMatrixd
{
    return BlockToMatrix(GenerateBlock(ops, depth, method, constLow, constHigh, rng), rows);
}

auto ExtractSubtree(NodeMatrixd const& m, Index row) -> RowBlock
{
    auto const sizes = SubtreeSizes(m);
    auto const first = row - sizes[static_cast<std::size_t>(row)] + 1;
    RowBlock block;
    block.reserve(static_cast<std::size_t>(row - first + 1));
    auto const base = static_cast<int>(first);
    for (Index r = first; r <= row; ++r) {
        int const l = m.Left(r);
        int const rt = m.Right(r);
        block.push_back({m.Function(r), l == NoChild ? NoChild : l - base, rt == NoChild ? NoChild : rt - base, m.Value(r)});
    }
    return block;
}

auto SpliceSubtree(NodeMatrixd const& m, Index row, RowBlock const& block) -> std::optional<NodeMatrixd>
{
    auto const rows = m.Rows();
    auto const sizes = SubtreeSizes(m);
    auto const used = static_cast<Index>(Complexity(m));
    auto const start = rows - used;
    auto const first = row - sizes[static_cast<std::size_t>(row)] + 1;
    auto const removed = row - first + 1;
    auto const added = static_cast<Index>(block.size());
    auto const total = used - removed + added;
    if (total > rows || block.empty()) {
        return std::nullopt;
    }
    auto const newStart = rows - total;
    auto const blockStart = newStart + (first - start);
    auto const blockRoot = blockStart + added - 1;
    // old row -> new row for rows outside the replaced subtree
    auto remap = [&](int old) -> int {
        if (old == NoChild) {
            return NoChild;
        }
        if (old < first) {
            return static_cast<int>(newStart + (old - start));
        }
        if (old == row) {
            return static_cast<int>(blockRoot);
        }
        return static_cast<int>(blockStart + added + (old - row - 1));
    };

    NodeMatrixd out(rows);
    for (Index r = start; r < first; ++r) {
        out.SetRow(remap(static_cast<int>(r)), m.Function(r), remap(m.Left(r)), remap(m.Right(r)), m.Value(r));
    }
    for (Index j = 0; j < added; ++j) {
        auto const& b = block[static_cast<std::size_t>(j)];
        auto const base = static_cast<int>(blockStart);
        out.SetRow(blockStart + j, b.function, b.left == NoChild ? NoChild : b.left + base,
            b.right == NoChild ? NoChild : b.right + base, b.value);
    }
    for (Index r = row + 1; r < rows; ++r) {
        out.SetRow(remap(static_cast<int>(r)), m.Function(r), remap(m.Left(r)), remap(m.Right(r)), m.Value(r));
    }
    return out;
}

auto WithinLimits(NodeMatrixd const& m, ShapeLimits const& limits) -> bool
{
    return static_cast<Index>(Complexity(m)) <= limits.rowCapacity && Depth(m) <= limits.maxDepth;
}

auto RandomActiveRow(NodeMatrixd const& m, RngStream& rng) -> Index
{
    auto const used = static_cast<Index>(Complexity(m));
    return m.Rows() - used + static_cast<Index>(rng.Index(static_cast<std::size_t>(used)));
}

auto CrossoverAt(NodeMatrixd const& a, NodeMatrixd const& b, Index rowA, Index rowB, ShapeLimits const& limits)
    -> std::pair<NodeMatrixd, NodeMatrixd>
{
    RequirePacked(a);
    RequirePacked(b);
    auto childA = Checked(SpliceSubtree(a, rowA, ExtractSubtree(b, rowB)), limits);
    auto childB = Checked(SpliceSubtree(b, rowB, ExtractSubtree(a, rowA)), limits);
    return {childA ? std::move(*childA) : a, childB ? std::move(*childB) : b};
}

auto Crossover(NodeMatrixd const& a, NodeMatrixd const& b, ShapeLimits const& limits, RngStream& rng)
    -> std::pair<NodeMatrixd, NodeMatrixd>
{
    auto const rowA = RandomActiveRow(a, rng);
    auto const rowB = RandomActiveRow(b, rng);
    return CrossoverAt(a, b, rowA, rowB, limits);
}

auto IsApplicable(MutationKind kind, NodeMatrixd const& m, OperatorSet const& ops) -> bool
{
    switch (kind) {
    case MutationKind::OperatorSwap:
        return !RowsOfKind(m, ops, [&](OperatorEntry const& e) {
            return IsOperator(e) && ops.OperatorsOfArity(e.arity).size() > 1;
        }).empty();
    case MutationKind::ConstantJitter:
        return !RowsOfKind(m, ops, [](OperatorEntry const& e) { return e.kind == NodeKind::Constant; }).empty();
    case MutationKind::VariableSwap:
        return ops.NumVariables() > 1
            && !RowsOfKind(m, ops, [](OperatorEntry const& e) { return e.kind == NodeKind::Variable; }).empty();
    case MutationKind::NodeDelete:
        return !RowsOfKind(m, ops, IsOperator).empty();
    case MutationKind::NodeInsert:
        return !ops.Operators().empty();
    case MutationKind::SubtreeReplace:
        return true;
    }
    return false;
}

auto MutateWith(MutationKind kind, NodeMatrixd const& m, OperatorSet const& ops, GpConfig const& cfg, RngStream& rng)
    -> std::optional<NodeMatrixd>
{
    RequirePacked(m);
    if (!IsApplicable(kind, m, ops)) {
        return std::nullopt;
    }
    auto const limits = LimitsOf(cfg);
    switch (kind) {
    case MutationKind::OperatorSwap: {
        auto const rows = RowsOfKind(m, ops, [&](OperatorEntry const& e) {
            return IsOperator(e) && ops.OperatorsOfArity(e.arity).size() > 1;
        });
        auto const row = Pick(rows, rng);
        auto const current = m.Function(row);
        std::vector<int> choices;
        for (int fn : ops.OperatorsOfArity(ops.Arity(current))) {
            if (fn != current) {
                choices.push_back(fn);
            }
        }
        NodeMatrixd out = m;
        out.SetFunction(row, Pick(choices, rng));
        return out;
    }
    case MutationKind::ConstantJitter: {
        auto const rows = RowsOfKind(m, ops, [](OperatorEntry const& e) { return e.kind == NodeKind::Constant; });
        auto const row = Pick(rows, rng);
        NodeMatrixd out = m;
        out.SetValue(row, m.Value(row) * std::exp(rng.Normal(0.0, 0.5)));
        return out;
    }
    case MutationKind::VariableSwap: {
        auto const rows = RowsOfKind(m, ops, [](OperatorEntry const& e) { return e.kind == NodeKind::Variable; });
        auto const row = Pick(rows, rng);
        auto const current = ops.VariableOf(m.Function(row));
        auto other = rng.Index(ops.NumVariables() - 1);
        other += other >= current ? 1 : 0;
        NodeMatrixd out = m;
        out.SetFunction(row, ops.VariableIndex(other));
        return out;
    }
    case MutationKind::SubtreeReplace: {
        auto const row = RandomActiveRow(m, rng);
        auto const depth = 1 + static_cast<int>(rng.Index(3));
        auto block = GenerateBlock(ops, depth, InitMethod::Grow, cfg.constInitLow, cfg.constInitHigh, rng);
        return Checked(SpliceSubtree(m, row, block), limits);
    }
    case MutationKind::NodeInsert: {
        auto const row = RandomActiveRow(m, rng);
        auto const operators = ops.Operators();
        int const fn = operators[rng.Index(operators.size())];
        auto block = ExtractSubtree(m, row);
        auto const oldRoot = static_cast<int>(block.size()) - 1;
        if (ops.Arity(fn) == 1) {
            block.push_back({fn, oldRoot, NoChild, 0.0});
        } else {
            auto const sibling = RandomLeaf(ops, cfg.constInitLow, cfg.constInitHigh, rng);
            if (rng.Bernoulli(0.5)) {
                block.push_back(sibling);
                block.push_back({fn, oldRoot, oldRoot + 1, 0.0});
            } else {
                // sibling first: shift the existing subtree by one row
                RowBlock shifted;
                shifted.reserve(block.size() + 2);
                shifted.push_back(sibling);
                for (auto b : block) {
                    b.left = b.left == NoChild ? NoChild : b.left + 1;
                    b.right = b.right == NoChild ? NoChild : b.right + 1;
                    shifted.push_back(b);
                }
                shifted.push_back({fn, 0, oldRoot + 1, 0.0});
                block = std::move(shifted);
            }
        }
        return Checked(SpliceSubtree(m, row, block), limits);
    }
    case MutationKind::NodeDelete: {
        auto const rows = RowsOfKind(m, ops, IsOperator);
        auto const row = Pick(rows, rng);
        Index child = m.Left(row);
        if (m.Right(row) != NoChild && rng.Bernoulli(0.5)) {
            child = m.Right(row);
        }
        return Checked(SpliceSubtree(m, row, ExtractSubtree(m, child)), limits);
    }
    }
    return std::nullopt;
}

auto Mutate(NodeMatrixd const& m, OperatorSet const& ops, GpConfig const& cfg, RngStream& rng) -> NodeMatrixd
{
    auto const& w = cfg.mutationWeights;
    std::array const kinds{MutationKind::OperatorSwap, MutationKind::SubtreeReplace, MutationKind::ConstantJitter,
        MutationKind::VariableSwap, MutationKind::NodeInsert, MutationKind::NodeDelete};
    std::array weights{w.operatorSwap, w.subtreeReplace, w.constantJitter, w.variableSwap, w.nodeInsert, w.nodeDelete};
    double total = 0.0;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        if (!IsApplicable(kinds[k], m, ops)) {
            weights[k] = 0.0;
        }
        total += weights[k];
    }
    if (total <= 0.0) {
        return m;
    }
    constexpr int attempts = 4;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        auto const kind = kinds[pick(rng)];
        if (auto out = MutateWith(kind, m, ops, cfg, rng)) {
            return std::move(*out);
        }
    }
    return m;
}

} // namespace treeforge

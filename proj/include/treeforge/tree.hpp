// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "treeforge/error.hpp"
#include "treeforge/node_matrix.hpp"
#include "treeforge/operator_set.hpp"

namespace treeforge {

/// Pointer-free recursive expression tree. Used as the reference
/// representation when checking the matrix encoding and interpreter.
template <typename Scalar>
struct BasicTree {
    int function{OperatorSet::ConstantIndex};
    Scalar value{0};
    std::vector<BasicTree> children;

    static auto Constant(Scalar v) -> BasicTree { return {OperatorSet::ConstantIndex, v, {}}; }
    static auto Variable(OperatorSet const& ops, std::size_t variable) -> BasicTree
    {
        return {ops.VariableIndex(variable), Scalar{0}, {}};
    }
    static auto Op(OperatorSet const& ops, std::string const& name, std::vector<BasicTree> args) -> BasicTree
    {
        auto index = ops.IndexOf(name);
        if (!index) {
            throw Error("operator '" + name + "' is not in the operator set");
        }
        return {*index, Scalar{0}, std::move(args)};
    }

    [[nodiscard]] auto Size() const -> std::size_t
    {
        std::size_t n = 1;
        for (auto const& c : children) {
            n += c.Size();
        }
        return n;
    }

    [[nodiscard]] auto Depth() const -> int
    {
        int d = 0;
        for (auto const& c : children) {
            d = std::max(d, c.Depth());
        }
        return d + 1;
    }

    friend auto operator==(BasicTree const& a, BasicTree const& b) -> bool
    {
        if (a.function != b.function || a.children != b.children) {
            return false;
        }
        return a.function != OperatorSet::ConstantIndex || a.value == b.value;
    }
};

using RecursiveTree = BasicTree<double>;

namespace detail {

template <typename Scalar>
auto Place(BasicTree<Scalar> const& t, OperatorSet const& ops, NodeMatrix<Scalar>& m, Index& next) -> int
{
    if (!ops.Contains(t.function) || t.function == OperatorSet::EmptyIndex) {
        throw ValidationError("tree node has invalid function index " + std::to_string(t.function));
    }
    if (static_cast<int>(t.children.size()) != ops.Arity(t.function)) {
        throw ValidationError("arity mismatch for '" + ops.Entry(t.function).name + "'");
    }
    int left = NoChild;
    int right = NoChild;
    if (!t.children.empty()) {
        left = Place(t.children[0], ops, m, next);
    }
    if (t.children.size() > 1) {
        right = Place(t.children[1], ops, m, next);
    }
    auto const row = next++;
    auto const value = t.function == OperatorSet::ConstantIndex ? t.value : Scalar{0};
    m.SetRow(row, t.function, left, right, value);
    return static_cast<int>(row);
}

template <typename Scalar>
auto Build(NodeMatrix<Scalar> const& m, Index row) -> BasicTree<Scalar>
{
    BasicTree<Scalar> t;
    t.function = m.Function(row);
    t.value = t.function == OperatorSet::ConstantIndex ? m.Value(row) : Scalar{0};
    for (int child : {m.Left(row), m.Right(row)}) {
        if (child != NoChild) {
            t.children.push_back(Build(m, child));
        }
    }
    return t;
}

} // namespace detail

/// Post-order placement into the last rows of an R-row matrix, root last.
/// Throws CapacityError when the tree has more nodes than rows.
template <typename Scalar>
[[nodiscard]] auto Encode(BasicTree<Scalar> const& tree, OperatorSet const& ops, Index rows = DefaultRowCapacity)
    -> NodeMatrix<Scalar>
{
    auto const n = static_cast<Index>(tree.Size());
    if (n > rows) {
        throw CapacityError(static_cast<std::size_t>(n), static_cast<std::size_t>(rows));
    }
    NodeMatrix<Scalar> m(rows);
    Index next = rows - n;
    detail::Place(tree, ops, m, next);
    return m;
}

template <typename Scalar>
[[nodiscard]] auto Decode(NodeMatrix<Scalar> const& m, OperatorSet const& ops) -> BasicTree<Scalar>
{
    if (auto violation = Validate(m, ops)) {
        throw ValidationError("row " + std::to_string(violation->row) + ": " + violation->message);
    }
    return detail::Build(m, *RootRow(m));
}

/// Reads the variable values from `inputs`; must cover every variable used.
template <typename Scalar>
[[nodiscard]] auto EvaluateOracle(BasicTree<Scalar> const& t, OperatorSet const& ops, std::span<Scalar const> inputs)
    -> Scalar
{
    auto const& entry = ops.Entry(t.function);
    switch (entry.kind) {
    case NodeKind::Constant: return t.value;
    case NodeKind::Variable: return inputs[ops.VariableOf(t.function)];
    case NodeKind::Unary: return ApplyUnary(entry.code, EvaluateOracle(t.children[0], ops, inputs));
    case NodeKind::Binary:
        return ApplyBinary(entry.code, EvaluateOracle(t.children[0], ops, inputs),
            EvaluateOracle(t.children[1], ops, inputs));
    default: return Scalar{0};
    }
}

/// Rewrites any valid matrix into post-order packed layout.
template <typename Scalar>
[[nodiscard]] auto Canonicalize(NodeMatrix<Scalar> const& m, OperatorSet const& ops) -> NodeMatrix<Scalar>
{
    return Encode(Decode(m, ops), ops, m.Rows());
}

} // namespace treeforge

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeforge/operator_set.hpp"
#include "treeforge/rng.hpp"
#include "treeforge/tree.hpp"

namespace treeforge::testing {

/// Every catalog operator over `vars` variables.
inline auto CatalogOperators(std::size_t vars) -> OperatorSet
{
    auto const names = OperatorCatalog();
    return BuildOperatorSet(names, vars);
}

/// Random recursive tree, built without the engine's generators so the
/// engine can be checked against it.
inline auto RandomTree(OperatorSet const& ops, int maxDepth, RngStream& rng) -> RecursiveTree
{
    auto const operators = ops.Operators();
    if (maxDepth <= 1 || rng.Bernoulli(0.3)) {
        if (rng.Bernoulli(0.5)) {
            return RecursiveTree::Constant(rng.Uniform(-3.0, 3.0));
        }
        return RecursiveTree::Variable(ops, rng.Index(ops.NumVariables()));
    }
    int const fn = operators[rng.Index(operators.size())];
    RecursiveTree t{fn, 0.0, {}};
    for (int i = 0; i < ops.Arity(fn); ++i) {
        t.children.push_back(RandomTree(ops, maxDepth - 1, rng));
    }
    return t;
}

/// Nodes of `t` in post-order.
inline void PostOrder(RecursiveTree& t, std::vector<RecursiveTree*>& out)
{
    for (auto& c : t.children) {
        PostOrder(c, out);
    }
    out.push_back(&t);
}

inline auto PostOrderNodes(RecursiveTree& t) -> std::vector<RecursiveTree*>
{
    std::vector<RecursiveTree*> out;
    PostOrder(t, out);
    return out;
}

/// Recursive evaluation with operator semantics written out here rather
/// than taken from the engine.
inline auto ReferenceEvaluate(RecursiveTree const& t, OperatorSet const& ops, std::span<double const> in) -> double
{
    auto const& e = ops.Entry(t.function);
    if (e.kind == NodeKind::Constant) {
        return t.value;
    }
    if (e.kind == NodeKind::Variable) {
        return in[ops.VariableOf(t.function)];
    }
    double const a = ReferenceEvaluate(t.children[0], ops, in);
    if (e.arity == 1) {
        if (e.name == "sin") return std::sin(a);
        if (e.name == "cos") return std::cos(a);
        if (e.name == "log") return std::log(a);
        if (e.name == "exp") return std::exp(a);
        if (e.name == "sqrt") return std::sqrt(a);
        if (e.name == "tanh") return std::tanh(a);
        throw std::logic_error("unary " + e.name);
    }
    double const b = ReferenceEvaluate(t.children[1], ops, in);
    if (e.name == "+") return a + b;
    if (e.name == "-") return a - b;
    if (e.name == "*") return a * b;
    if (e.name == "/") return a / b;
    if (e.name == "pow") {
        if (b == std::trunc(b)) {
            return std::pow(a, b);
        }
        double const mag = std::pow(std::abs(a), b);
        return a < 0 ? -mag : mag;
    }
    throw std::logic_error("binary " + e.name);
}

/// Same value, or both non-finite of the same class (NaN, +inf, -inf).
inline auto SameOutcome(double a, double b, double tol) -> bool
{
    if (std::isnan(a) || std::isnan(b)) {
        return std::isnan(a) && std::isnan(b);
    }
    if (std::isinf(a) || std::isinf(b)) {
        return a == b;
    }
    return std::abs(a - b) <= tol;
}

} // namespace treeforge::testing

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <array>
#include <cstdio>
#include <string>

#include "treeforge/node_matrix.hpp"
#include "treeforge/operator_set.hpp"

namespace treeforge {

// "%.<digits>g" with a trailing ".0" for integral values.
inline auto FormatConstant(double value, int digits) -> std::string
{
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*g", digits, value);
    std::string s(buf.data());
    if (s.find_first_of(".eEni") == std::string::npos) {
        s += ".0";
    }
    return s;
}

namespace detail {

template <typename Scalar>
auto Infix(NodeMatrix<Scalar> const& m, OperatorSet const& ops, Index row, int digits) -> std::string
{
    auto const& entry = ops.Entry(m.Function(row));
    switch (entry.kind) {
    case NodeKind::Constant: return FormatConstant(static_cast<double>(m.Value(row)), digits);
    case NodeKind::Variable: return entry.name;
    case NodeKind::Unary: return entry.name + "(" + Infix(m, ops, m.Left(row), digits) + ")";
    case NodeKind::Binary: {
        auto const symbol = entry.code == OpCode::Pow ? std::string("^") : entry.name;
        return "(" + Infix(m, ops, m.Left(row), digits) + " " + symbol + " " + Infix(m, ops, m.Right(row), digits) + ")";
    }
    default: return "?";
    }
}

} // namespace detail

/// Fully parenthesised infix rendering; no simplification is applied.
template <typename Scalar>
[[nodiscard]] auto ToInfix(NodeMatrix<Scalar> const& m, OperatorSet const& ops, int constPrecision = 4) -> std::string
{
    auto root = RootRow(m);
    return root ? detail::Infix(m, ops, *root, constPrecision) : std::string{};
}

} // namespace treeforge

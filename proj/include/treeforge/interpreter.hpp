// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <span>
#include <type_traits>
#include <vector>

#include "treeforge/node_matrix.hpp"
#include "treeforge/operator_set.hpp"

namespace treeforge {

namespace detail {

// Scratch column for a single evaluation; stays on the stack for usual sizes.
template <typename Scalar>
class ValueScratch {
public:
    explicit ValueScratch(Index rows)
    {
        if (rows > static_cast<Index>(inline_.size())) {
            heap_.resize(static_cast<std::size_t>(rows));
            data_ = heap_.data();
        }
    }
    auto operator[](Index i) -> Scalar& { return data_[i]; }

private:
    std::array<Scalar, 128> inline_{};
    std::vector<Scalar> heap_;
    Scalar* data_{inline_.data()};
};

struct NoRowHook {
    constexpr void operator()(Index /*row*/) const noexcept {}
};

} // namespace detail

/// Single bottom-to-top pass over all rows. `onRow` is invoked once per row
/// visited (used to instrument the interpreter in tests).
template <typename Scalar, typename RowHook>
[[nodiscard]] auto EvaluateWith(NodeMatrix<Scalar> const& m, OperatorSet const& ops, std::span<Scalar const> inputs,
    RowHook&& onRow) -> Scalar
{
    auto const rows = m.Rows();
    detail::ValueScratch<Scalar> value(rows);
    auto const entries = ops.Entries();
    Index last = -1;
    for (Index r = 0; r < rows; ++r) {
        onRow(r);
        int const fn = m.Function(r);
        auto const& entry = entries[static_cast<std::size_t>(fn)];
        switch (entry.kind) {
        case NodeKind::Empty: value[r] = Scalar{0}; continue;
        case NodeKind::Constant: value[r] = m.Value(r); break;
        case NodeKind::Variable: value[r] = inputs[ops.VariableOf(fn)]; break;
        case NodeKind::Unary: value[r] = ApplyUnary(entry.code, value[m.Left(r)]); break;
        case NodeKind::Binary: value[r] = ApplyBinary(entry.code, value[m.Left(r)], value[m.Right(r)]); break;
        }
        last = r;
    }
    return last < 0 ? Scalar{0} : value[last];
}

template <typename Scalar>
[[nodiscard]] auto Evaluate(NodeMatrix<Scalar> const& m, OperatorSet const& ops, std::span<Scalar const> inputs)
    -> Scalar
{
    return EvaluateWith(m, ops, inputs, detail::NoRowHook{});
}

template <typename Scalar, int Rows>
[[nodiscard]] auto Evaluate(NodeMatrix<Scalar> const& m, OperatorSet const& ops,
    Eigen::Matrix<Scalar, Rows, 1> const& inputs) -> Scalar
{
    return Evaluate(m, ops, std::span<Scalar const>(inputs.data(), static_cast<std::size_t>(inputs.size())));
}

/// Evaluates the tree on every row of `inputs` (n x k) at once, one matrix
/// row at a time across all data points. Results are bit-identical to
/// calling Evaluate per data point.
template <typename Scalar>
[[nodiscard]] auto EvaluateBatch(NodeMatrix<Scalar> const& m, OperatorSet const& ops,
    std::type_identity_t<Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> const>> const& inputs)
    -> Eigen::Array<Scalar, Eigen::Dynamic, 1>
{
    using Values = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    auto const rows = m.Rows();
    auto const n = inputs.rows();
    Values value(rows, n);
    auto const entries = ops.Entries();
    Index last = -1;
    for (Index r = 0; r < rows; ++r) {
        int const fn = m.Function(r);
        auto const& entry = entries[static_cast<std::size_t>(fn)];
        auto out = value.row(r);
        switch (entry.kind) {
        case NodeKind::Empty: continue;
        case NodeKind::Constant: out.setConstant(m.Value(r)); break;
        case NodeKind::Variable:
            out = inputs.col(static_cast<Index>(ops.VariableOf(fn))).transpose().array();
            break;
        case NodeKind::Unary: {
            auto const code = entry.code;
            out = value.row(m.Left(r)).unaryExpr([code](Scalar a) { return ApplyUnary(code, a); });
            break;
        }
        case NodeKind::Binary: {
            auto const a = value.row(m.Left(r));
            auto const b = value.row(m.Right(r));
            switch (entry.code) {
            case OpCode::Add: out = a + b; break;
            case OpCode::Sub: out = a - b; break;
            case OpCode::Mul: out = a * b; break;
            case OpCode::Div: out = a / b; break;
            default: {
                auto const code = entry.code;
                out = a.binaryExpr(b, [code](Scalar x, Scalar y) { return ApplyBinary(code, x, y); });
            }
            }
            break;
        }
        }
        last = r;
    }
    if (last < 0) {
        return Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(n);
    }
    return value.row(last).transpose();
}

} // namespace treeforge

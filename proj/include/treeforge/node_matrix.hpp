// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "treeforge/operator_set.hpp"

namespace treeforge {

using Index = Eigen::Index;

inline constexpr int NoChild = -1;
inline constexpr Index DefaultRowCapacity = 32;

/// Fixed-capacity tree encoding: one row per node holding
/// (function index, left child row, right child row, value).
///
/// Rows are executed from 0 upwards, so a child always sits on a lower row
/// than its parent and the root is the last active row. Unused rows are all
/// zero. Column 3 stores the constant of constant rows and is otherwise 0;
/// evaluation writes intermediate values into a scratch copy, never here.
template <typename Scalar>
class NodeMatrix {
public:
    using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, 4>;

    static constexpr Index FunctionCol = 0;
    static constexpr Index LeftCol = 1;
    static constexpr Index RightCol = 2;
    static constexpr Index ValueCol = 3;

    explicit NodeMatrix(Index rows = DefaultRowCapacity)
        : data_(Storage::Zero(rows, 4))
    {
    }

    explicit NodeMatrix(Storage data)
        : data_(std::move(data))
    {
    }

    [[nodiscard]] auto Rows() const noexcept -> Index { return data_.rows(); }

    [[nodiscard]] auto Function(Index row) const -> int { return static_cast<int>(data_(row, FunctionCol)); }
    [[nodiscard]] auto Left(Index row) const -> int { return static_cast<int>(data_(row, LeftCol)); }
    [[nodiscard]] auto Right(Index row) const -> int { return static_cast<int>(data_(row, RightCol)); }
    [[nodiscard]] auto Value(Index row) const -> Scalar { return data_(row, ValueCol); }
    [[nodiscard]] auto IsActive(Index row) const -> bool { return Function(row) != OperatorSet::EmptyIndex; }

    void SetRow(Index row, int function, int left, int right, Scalar value = Scalar{0})
    {
        data_(row, FunctionCol) = static_cast<Scalar>(function);
        data_(row, LeftCol) = static_cast<Scalar>(left);
        data_(row, RightCol) = static_cast<Scalar>(right);
        data_(row, ValueCol) = value;
    }

    void SetFunction(Index row, int function) { data_(row, FunctionCol) = static_cast<Scalar>(function); }
    void SetValue(Index row, Scalar value) { data_(row, ValueCol) = value; }
    void ClearRow(Index row) { data_.row(row).setZero(); }
    void Clear() { data_.setZero(); }

    [[nodiscard]] auto Data() const noexcept -> Storage const& { return data_; }
    [[nodiscard]] auto Data() noexcept -> Storage& { return data_; }

    friend auto operator==(NodeMatrix const& a, NodeMatrix const& b) -> bool
    {
        return a.data_.rows() == b.data_.rows() && a.data_ == b.data_;
    }

private:
    Storage data_;
};

using NodeMatrixd = NodeMatrix<double>;

/// First invariant breach found by Validate, with the offending row.
struct Violation {
    Index row{-1};
    std::string message;
};

template <typename Scalar>
[[nodiscard]] auto RootRow(NodeMatrix<Scalar> const& m) -> std::optional<Index>
{
    for (Index r = m.Rows() - 1; r >= 0; --r) {
        if (m.IsActive(r)) {
            return r;
        }
    }
    return std::nullopt;
}

/// Number of active rows.
template <typename Scalar>
[[nodiscard]] auto Complexity(NodeMatrix<Scalar> const& m) -> std::size_t
{
    std::size_t count = 0;
    for (Index r = 0; r < m.Rows(); ++r) {
        count += m.IsActive(r) ? 1U : 0U;
    }
    return count;
}

/// Height of every row (leaves are 1, empty rows 0).
template <typename Scalar>
[[nodiscard]] auto RowHeights(NodeMatrix<Scalar> const& m) -> std::vector<int>
{
    std::vector<int> height(static_cast<std::size_t>(m.Rows()), 0);
    for (Index r = 0; r < m.Rows(); ++r) {
        if (!m.IsActive(r)) {
            continue;
        }
        int h = 0;
        for (int child : {m.Left(r), m.Right(r)}) {
            if (child != NoChild) {
                h = std::max(h, height[static_cast<std::size_t>(child)]);
            }
        }
        height[static_cast<std::size_t>(r)] = h + 1;
    }
    return height;
}

template <typename Scalar>
[[nodiscard]] auto Depth(NodeMatrix<Scalar> const& m) -> int
{
    auto root = RootRow(m);
    return root ? RowHeights(m)[static_cast<std::size_t>(*root)] : 0;
}

/// Subtree sizes per row (0 for empty rows).
template <typename Scalar>
[[nodiscard]] auto SubtreeSizes(NodeMatrix<Scalar> const& m) -> std::vector<int>
{
    std::vector<int> size(static_cast<std::size_t>(m.Rows()), 0);
    for (Index r = 0; r < m.Rows(); ++r) {
        if (!m.IsActive(r)) {
            continue;
        }
        int s = 1;
        for (int child : {m.Left(r), m.Right(r)}) {
            if (child != NoChild) {
                s += size[static_cast<std::size_t>(child)];
            }
        }
        size[static_cast<std::size_t>(r)] = s;
    }
    return size;
}

/// Checks every structural invariant and reports the first violation.
template <typename Scalar>
[[nodiscard]] auto Validate(NodeMatrix<Scalar> const& m, OperatorSet const& ops) -> std::optional<Violation>
{
    using std::floor;
    auto const rows = m.Rows();
    auto const& d = m.Data();
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < 3; ++c) {
            if (d(r, c) != floor(d(r, c))) {
                return Violation{r, "non-integral index column"};
            }
        }
        if (!ops.Contains(m.Function(r))) {
            return Violation{r, "unknown function index"};
        }
        if (!m.IsActive(r) && !d.row(r).isZero(0)) {
            return Violation{r, "empty row is not all zero"};
        }
    }

    auto root = RootRow(m);
    if (!root) {
        return Violation{-1, "no active root"};
    }

    std::vector<int> parents(static_cast<std::size_t>(rows), 0);
    for (Index r = 0; r <= *root; ++r) {
        if (!m.IsActive(r)) {
            continue;
        }
        int const left = m.Left(r);
        int const right = m.Right(r);
        for (int child : {left, right}) {
            if (child == NoChild) {
                continue;
            }
            if (child < 0) {
                return Violation{r, "invalid child reference"};
            }
            if (child >= r) {
                return Violation{r, "forward child reference"};
            }
            if (!m.IsActive(child)) {
                return Violation{r, "reference to empty row"};
            }
            ++parents[static_cast<std::size_t>(child)];
        }
        int const arity = ops.Arity(m.Function(r));
        bool const shapeOk = (arity == 0 && left == NoChild && right == NoChild)
            || (arity == 1 && left != NoChild && right == NoChild)
            || (arity == 2 && left != NoChild && right != NoChild);
        if (!shapeOk) {
            return Violation{r, "arity mismatch"};
        }
        if (ops.Kind(m.Function(r)) != NodeKind::Constant && d(r, 3) != Scalar{0}) {
            return Violation{r, "value slot set on a non-constant row"};
        }
    }

    for (Index r = 0; r < *root; ++r) {
        if (!m.IsActive(r)) {
            continue;
        }
        auto const count = parents[static_cast<std::size_t>(r)];
        if (count == 0) {
            return Violation{r, "unreferenced row"};
        }
        if (count > 1) {
            return Violation{r, "row referenced more than once"};
        }
    }
    if (parents[static_cast<std::size_t>(*root)] != 0) {
        return Violation{*root, "root has a parent"};
    }
    return std::nullopt;
}

/// True when the active rows form one contiguous block ending at the last row
/// and every subtree occupies the contiguous block of rows that ends at its
/// root (post-order placement). Reproduction operators rely on this layout.
template <typename Scalar>
[[nodiscard]] auto IsPostOrderPacked(NodeMatrix<Scalar> const& m) -> bool
{
    auto const rows = m.Rows();
    auto const sizes = SubtreeSizes(m);
    auto const n = static_cast<Index>(Complexity(m));
    for (Index r = 0; r < rows; ++r) {
        if (m.IsActive(r) != (r >= rows - n)) {
            return false;
        }
    }
    for (Index r = rows - n; r < rows; ++r) {
        int const left = m.Left(r);
        int const right = m.Right(r);
        if (right != NoChild) {
            if (right != r - 1 || left != r - 1 - sizes[static_cast<std::size_t>(right)]) {
                return false;
            }
        } else if (left != NoChild && left != r - 1) {
            return false;
        }
    }
    return true;
}

} // namespace treeforge

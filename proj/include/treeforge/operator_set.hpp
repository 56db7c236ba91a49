// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treeforge {

enum class NodeKind : std::uint8_t { Empty, Constant, Variable, Unary, Binary };

// Primitive operations understood by the interpreter.
enum class OpCode : std::uint8_t { None, Add, Sub, Mul, Div, Pow, Sin, Cos, Log, Exp, Sqrt, Tanh };

struct OperatorEntry {
    std::string name;
    NodeKind kind{NodeKind::Empty};
    int arity{0};
    OpCode code{OpCode::None};
};

/// Function-index space shared by every tree built against it.
///
/// Layout is fixed: index 0 is the empty row, index 1 the constant, then one
/// index per input variable, then the operators in the order requested.
class OperatorSet {
public:
    static constexpr int EmptyIndex = 0;
    static constexpr int ConstantIndex = 1;

    OperatorSet() = default;

    [[nodiscard]] auto Size() const noexcept -> std::size_t { return entries_.size(); }
    [[nodiscard]] auto NumVariables() const noexcept -> std::size_t { return numVariables_; }
    [[nodiscard]] auto Entries() const noexcept -> std::span<OperatorEntry const> { return entries_; }
    [[nodiscard]] auto Entry(int index) const -> OperatorEntry const& { return entries_.at(static_cast<std::size_t>(index)); }

    [[nodiscard]] auto Arity(int index) const -> int { return Entry(index).arity; }
    [[nodiscard]] auto Kind(int index) const -> NodeKind { return Entry(index).kind; }
    [[nodiscard]] auto Contains(int index) const noexcept -> bool
    {
        return index >= 0 && static_cast<std::size_t>(index) < entries_.size();
    }

    [[nodiscard]] auto VariableIndex(std::size_t variable) const noexcept -> int { return 2 + static_cast<int>(variable); }
    [[nodiscard]] auto IsVariable(int index) const noexcept -> bool
    {
        return index >= 2 && index < 2 + static_cast<int>(numVariables_);
    }
    [[nodiscard]] auto VariableOf(int index) const noexcept -> std::size_t { return static_cast<std::size_t>(index - 2); }

    [[nodiscard]] auto IndexOf(std::string_view name) const -> std::optional<int>;

    // operator indices grouped by arity, used by random tree generation
    [[nodiscard]] auto Operators() const noexcept -> std::span<int const> { return operators_; }
    [[nodiscard]] auto OperatorsOfArity(int arity) const noexcept -> std::span<int const>
    {
        return arity == 1 ? std::span<int const>(unary_) : std::span<int const>(binary_);
    }

    friend auto BuildOperatorSet(std::span<std::string const> operators, std::size_t numVariables,
        std::span<std::string const> variableNames) -> OperatorSet;

private:
    std::vector<OperatorEntry> entries_;
    std::vector<int> operators_;
    std::vector<int> unary_;
    std::vector<int> binary_;
    std::size_t numVariables_{0};
};

/// Builds the index layout. Variables default to y1..yk when no names are given.
/// Throws Error naming the offending symbol when an operator is not in the catalog.
auto BuildOperatorSet(std::span<std::string const> operators, std::size_t numVariables,
    std::span<std::string const> variableNames = {}) -> OperatorSet;

auto BuildOperatorSet(std::initializer_list<std::string> operators, std::size_t numVariables,
    std::initializer_list<std::string> variableNames = {}) -> OperatorSet;

/// Names accepted by BuildOperatorSet.
auto OperatorCatalog() -> std::vector<std::string>;

auto OperatorSymbol(OpCode code) -> std::string_view;

// Real-valued power: integral exponents use std::pow directly, otherwise the
// magnitude is raised and the sign of the base reapplied.
template <typename Scalar>
inline auto SignSafePow(Scalar base, Scalar exponent) -> Scalar
{
    using std::abs;
    using std::floor;
    using std::pow;
    if (exponent == floor(exponent)) {
        return pow(base, exponent);
    }
    auto const magnitude = pow(abs(base), exponent);
    return base < Scalar{0} ? -magnitude : magnitude;
}

template <typename Scalar>
inline auto ApplyUnary(OpCode code, Scalar a) -> Scalar
{
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    using std::tanh;
    switch (code) {
    case OpCode::Sin: return sin(a);
    case OpCode::Cos: return cos(a);
    case OpCode::Log: return log(a);
    case OpCode::Exp: return exp(a);
    case OpCode::Sqrt: return sqrt(a);
    case OpCode::Tanh: return tanh(a);
    default: return Scalar{0};
    }
}

template <typename Scalar>
inline auto ApplyBinary(OpCode code, Scalar a, Scalar b) -> Scalar
{
    switch (code) {
    case OpCode::Add: return a + b;
    case OpCode::Sub: return a - b;
    case OpCode::Mul: return a * b;
    case OpCode::Div: return a / b;
    case OpCode::Pow: return SignSafePow(a, b);
    default: return Scalar{0};
    }
}

} // namespace treeforge

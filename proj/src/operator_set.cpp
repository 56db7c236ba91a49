// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/operator_set.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "treeforge/error.hpp"

namespace treeforge {

namespace {

struct CatalogItem {
    std::string_view name;
    std::string_view alias;
    OpCode code;
    int arity;
};

constexpr std::array Catalog{
    CatalogItem{"+", "add", OpCode::Add, 2},
    CatalogItem{"-", "sub", OpCode::Sub, 2},
    CatalogItem{"*", "mul", OpCode::Mul, 2},
    CatalogItem{"/", "div", OpCode::Div, 2},
    CatalogItem{"pow", "power", OpCode::Pow, 2},
    CatalogItem{"sin", "sin", OpCode::Sin, 1},
    CatalogItem{"cos", "cos", OpCode::Cos, 1},
    CatalogItem{"log", "log", OpCode::Log, 1},
    CatalogItem{"exp", "exp", OpCode::Exp, 1},
    CatalogItem{"sqrt", "sqrt", OpCode::Sqrt, 1},
    CatalogItem{"tanh", "tanh", OpCode::Tanh, 1},
};

auto FindCatalogItem(std::string_view symbol) -> CatalogItem const*
{
    // unicode spellings used in operator tables
    if (symbol == "−") { symbol = "-"; }
    if (symbol == "×") { symbol = "*"; }
    if (symbol == "÷") { symbol = "/"; }
    auto it = std::find_if(Catalog.begin(), Catalog.end(),
        [symbol](auto const& item) { return item.name == symbol || item.alias == symbol; });
    return it == Catalog.end() ? nullptr : &*it;
}

} // namespace

auto OperatorSymbol(OpCode code) -> std::string_view
{
    auto it = std::find_if(Catalog.begin(), Catalog.end(), [code](auto const& item) { return item.code == code; });
    return it == Catalog.end() ? std::string_view{} : it->name;
}

auto OperatorCatalog() -> std::vector<std::string>
{
    std::vector<std::string> names;
    names.reserve(Catalog.size());
    for (auto const& item : Catalog) {
        names.emplace_back(item.name);
    }
    return names;
}

auto OperatorSet::IndexOf(std::string_view name) const -> std::optional<int>
{
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].name == name) {
            return static_cast<int>(i);
        }
    }
    if (auto const* item = FindCatalogItem(name); item != nullptr) {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].code == item->code) {
                return static_cast<int>(i);
            }
        }
    }
    return std::nullopt;
}

auto BuildOperatorSet(std::span<std::string const> operators, std::size_t numVariables,
    std::span<std::string const> variableNames) -> OperatorSet
{
    if (numVariables == 0) {
        throw Error("an operator set needs at least one variable");
    }
    if (!variableNames.empty() && variableNames.size() != numVariables) {
        throw Error("expected " + std::to_string(numVariables) + " variable names, got " + std::to_string(variableNames.size()));
    }

    OperatorSet set;
    set.numVariables_ = numVariables;
    set.entries_.push_back({"<empty>", NodeKind::Empty, 0, OpCode::None});
    set.entries_.push_back({"<const>", NodeKind::Constant, 0, OpCode::None});

    std::unordered_set<std::string> seen;
    for (std::size_t v = 0; v < numVariables; ++v) {
        auto name = variableNames.empty() ? "y" + std::to_string(v + 1) : variableNames[v];
        if (!seen.insert(name).second) {
            throw Error("duplicate symbol '" + name + "'");
        }
        set.entries_.push_back({std::move(name), NodeKind::Variable, 0, OpCode::None});
    }
    for (auto const& symbol : operators) {
        auto const* item = FindCatalogItem(symbol);
        if (item == nullptr) {
            throw Error("unknown operator '" + symbol + "'");
        }
        std::string name{item->name};
        if (!seen.insert(name).second) {
            throw Error("duplicate symbol '" + name + "'");
        }
        auto const index = static_cast<int>(set.entries_.size());
        auto const kind = item->arity == 1 ? NodeKind::Unary : NodeKind::Binary;
        set.entries_.push_back({std::move(name), kind, item->arity, item->code});
        set.operators_.push_back(index);
        (item->arity == 1 ? set.unary_ : set.binary_).push_back(index);
    }
    return set;
}

auto BuildOperatorSet(std::initializer_list<std::string> operators, std::size_t numVariables,
    std::initializer_list<std::string> variableNames) -> OperatorSet
{
    std::vector<std::string> const ops(operators);
    std::vector<std::string> const names(variableNames);
    return BuildOperatorSet(std::span<std::string const>(ops), numVariables, std::span<std::string const>(names));
}

} // namespace treeforge

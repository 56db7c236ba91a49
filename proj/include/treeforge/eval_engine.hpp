// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>

#include "treeforge/individual.hpp"

namespace treeforge {

/// Immutable per-generation context handed to every fitness call.
struct EvalContext {
    std::uint64_t seed{0};
    std::size_t generation{0};
};

/// Fitness contract: lower is better, +inf for invalid candidates. Must be a
/// pure function of (individual, context) and safe to call concurrently.
using FitnessFn = std::function<double(Individual const&, EvalContext const&)>;

/// Calls `fitness`, mapping NaN and thrown exceptions to +inf.
auto SafeFitness(FitnessFn const& fitness, Individual const& ind, EvalContext const& ctx) noexcept -> double;

/// Assigns every individual's fitness. Results do not depend on `workers`.
void BatchEvaluate(Population& pop, FitnessFn const& fitness, EvalContext const& ctx, std::size_t workers);

/// Mean absolute error of the tree on (X, Y); +inf if any prediction is non-finite.
auto EvaluateOnDataset(NodeMatrixd const& m, OperatorSet const& ops, Eigen::Ref<Eigen::MatrixXd const> const& X,
    Eigen::Ref<Eigen::VectorXd const> const& Y) -> double;

/// Mean absolute error with non-finite predictions mapped to +inf; the sum is
/// accumulated sequentially in index order.
auto MeanAbsoluteError(Eigen::Ref<Eigen::ArrayXd const> const& predicted, Eigen::Ref<Eigen::ArrayXd const> const& target)
    -> double;

} // namespace treeforge

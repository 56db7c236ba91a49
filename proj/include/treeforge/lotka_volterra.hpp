// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <Eigen/Core>

#include "treeforge/individual.hpp"
#include "treeforge/ode.hpp"
#include "treeforge/operator_set.hpp"
#include "treeforge/rng.hpp"

namespace treeforge {

struct LotkaVolterraParams {
    double alpha{1.1};
    double beta{0.4};
    double delta{0.1};
    double gamma{0.4};
};

/// dx/dt = alpha x - beta x y, dy/dt = delta x y - gamma y.
[[nodiscard]] inline auto LotkaVolterraRhs(LotkaVolterraParams const& p, Eigen::Vector2d const& s) -> Eigen::Vector2d
{
    return {p.alpha * s[0] - p.beta * s[0] * s[1], p.delta * s[0] * s[1] - p.gamma * s[1]};
}

/// One observed predator-prey trajectory and the two fitness functions
/// built on it. Prey is x, predator y.
class LotkaVolterraProblem {
public:
    static constexpr double StartTime = 0.0;
    static constexpr double EndTime = 30.0;
    static constexpr double TimeStep = 0.1;
    static constexpr double NegativityPenalty = 10.0;

    /// The initial state is drawn uniformly from [5, 15]^2.
    explicit LotkaVolterraProblem(RngStream rng, LotkaVolterraParams params = {});

    [[nodiscard]] auto Params() const noexcept -> LotkaVolterraParams const& { return params_; }
    [[nodiscard]] auto Initial() const noexcept -> Eigen::Vector2d const& { return initial_; }
    [[nodiscard]] auto Observed() const noexcept -> Trajectory<double> const& { return trajectory_; }
    [[nodiscard]] auto Derivatives() const noexcept -> Eigen::MatrixXd const& { return derivatives_; }

    /// Operators {+, -, *, /, pow} over (x, y).
    [[nodiscard]] static auto FullOperators() -> OperatorSet;
    /// Operators {+, -, *} over (x, y).
    [[nodiscard]] static auto PartialOperators() -> OperatorSet;

    /// Mean over both equations of the MAE between the tree predictions on
    /// the observed states and the finite-difference derivatives.
    [[nodiscard]] auto FullyObservedFitness(Individual const& ind, OperatorSet const& ops) const -> double;

    /// Integrates the candidate pair from the true initial state; MAE on prey
    /// plus NegativityPenalty times the fraction of time points with a
    /// negative population. Divergence gives +inf.
    [[nodiscard]] auto PartialFitness(Individual const& ind, OperatorSet const& ops) const -> double;

private:
    LotkaVolterraParams params_;
    Eigen::Vector2d initial_;
    Trajectory<double> trajectory_;
    Eigen::MatrixXd derivatives_;
};

} // namespace treeforge

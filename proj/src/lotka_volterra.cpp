// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/lotka_volterra.hpp"

#include <cmath>
#include <limits>

#include "treeforge/eval_engine.hpp"
#include "treeforge/interpreter.hpp"

namespace treeforge {

LotkaVolterraProblem::LotkaVolterraProblem(RngStream rng, LotkaVolterraParams params)
    : params_(params)
{
    initial_ = {rng.Uniform(5.0, 15.0), rng.Uniform(5.0, 15.0)};
    auto rhs = [p = params_](double /*t*/, Eigen::Vector2d const& s) { return LotkaVolterraRhs(p, s); };
    trajectory_ = Rk4Integrate(rhs, initial_, StartTime, EndTime, TimeStep);
    derivatives_ = FiniteDifferenceTargets(trajectory_);
}

auto LotkaVolterraProblem::FullOperators() -> OperatorSet
{
    return BuildOperatorSet({"+", "-", "*", "/", "pow"}, 2, {"x", "y"});
}

auto LotkaVolterraProblem::PartialOperators() -> OperatorSet
{
    return BuildOperatorSet({"+", "-", "*"}, 2, {"x", "y"});
}

auto LotkaVolterraProblem::FullyObservedFitness(Individual const& ind, OperatorSet const& ops) const -> double
{
    double total = 0.0;
    for (Eigen::Index dim = 0; dim < 2; ++dim) {
        Eigen::ArrayXd const predicted = EvaluateBatch(ind.trees[static_cast<std::size_t>(dim)], ops, trajectory_.states);
        total += MeanAbsoluteError(predicted, derivatives_.col(dim).array());
    }
    return total / 2.0;
}

auto LotkaVolterraProblem::PartialFitness(Individual const& ind, OperatorSet const& ops) const -> double
{
    constexpr auto inf = std::numeric_limits<double>::infinity();
    auto const& prey = ind.trees[0];
    auto const& predator = ind.trees[1];
    auto rhs = [&](double /*t*/, Eigen::Vector2d const& s) -> Eigen::Vector2d {
        return {Evaluate(prey, ops, s), Evaluate(predator, ops, s)};
    };
    auto const candidate = Rk4Integrate(rhs, initial_, StartTime, EndTime, TimeStep);
    if (candidate.divergent) {
        return inf;
    }
    auto const n = candidate.Points();
    double error = 0.0;
    std::size_t negative = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        error += std::abs(candidate.states(i, 0) - trajectory_.states(i, 0));
        negative += (candidate.states(i, 0) < 0.0 || candidate.states(i, 1) < 0.0) ? 1U : 0U;
    }
    double const fitness = error / static_cast<double>(n)
        + NegativityPenalty * static_cast<double>(negative) / static_cast<double>(n);
    return std::isfinite(fitness) ? fitness : inf;
}

} // namespace treeforge

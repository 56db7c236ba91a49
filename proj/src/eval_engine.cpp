// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/eval_engine.hpp"

#include <cmath>
#include <limits>

#include "treeforge/error.hpp"
#include "treeforge/interpreter.hpp"
#include "treeforge/parallel.hpp"

namespace treeforge {

auto SafeFitness(FitnessFn const& fitness, Individual const& ind, EvalContext const& ctx) noexcept -> double
{
    constexpr auto inf = std::numeric_limits<double>::infinity();
    try {
        double const f = fitness(ind, ctx);
        return std::isnan(f) ? inf : f;
    } catch (...) {
        return inf;
    }
}

void BatchEvaluate(Population& pop, FitnessFn const& fitness, EvalContext const& ctx, std::size_t workers)
{
    ParallelFor(pop.size(), workers, [&](std::size_t i) { pop[i].fitness = SafeFitness(fitness, pop[i], ctx); });
}

auto MeanAbsoluteError(Eigen::Ref<Eigen::ArrayXd const> const& predicted, Eigen::Ref<Eigen::ArrayXd const> const& target)
    -> double
{
    constexpr auto inf = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (Index i = 0; i < predicted.size(); ++i) {
        if (!std::isfinite(predicted[i])) {
            return inf;
        }
        sum += std::abs(predicted[i] - target[i]);
    }
    double const mae = sum / static_cast<double>(predicted.size());
    return std::isfinite(mae) ? mae : inf;
}

auto EvaluateOnDataset(NodeMatrixd const& m, OperatorSet const& ops, Eigen::Ref<Eigen::MatrixXd const> const& X,
    Eigen::Ref<Eigen::VectorXd const> const& Y) -> double
{
    if (X.cols() != static_cast<Index>(ops.NumVariables()) || X.rows() != Y.size()) {
        throw Error("dataset shape does not match the operator set");
    }
    Eigen::ArrayXd const predicted = EvaluateBatch(m, ops, X);
    return MeanAbsoluteError(predicted, Y.array());
}

} // namespace treeforge

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/const_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treeforge/parallel.hpp"

namespace treeforge {

auto ExtractConstants(Individual const& ind) -> ConstVector
{
    ConstVector cv;
    std::vector<double> values;
    for (std::size_t t = 0; t < ind.trees.size(); ++t) {
        auto const& m = ind.trees[t];
        for (Index r = 0; r < m.Rows(); ++r) {
            if (m.Function(r) == OperatorSet::ConstantIndex) {
                cv.locations.push_back({t, r});
                values.push_back(m.Value(r));
            }
        }
    }
    cv.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
    return cv;
}

void InjectConstants(Individual& ind, std::vector<ConstLocation> const& locations,
    Eigen::Ref<Eigen::VectorXd const> const& values)
{
    for (std::size_t i = 0; i < locations.size(); ++i) {
        ind.trees[locations[i].tree].SetValue(locations[i].row, values[static_cast<Index>(i)]);
    }
}

auto WithConstants(Individual ind, std::vector<ConstLocation> const& locations,
    Eigen::Ref<Eigen::VectorXd const> const& values) -> Individual
{
    InjectConstants(ind, locations, values);
    return ind;
}

auto NumericGradient(Individual const& ind, ConstVector const& cv, FitnessFn const& fitness, EvalContext const& ctx,
    double h) -> Eigen::VectorXd
{
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(cv.Size());
    Individual probe = ind;
    InjectConstants(probe, cv.locations, cv.values);
    for (Index i = 0; i < cv.Size(); ++i) {
        auto const& loc = cv.locations[static_cast<std::size_t>(i)];
        double const c = cv.values[i];
        double const step = h * std::max(1.0, std::abs(c));
        probe.trees[loc.tree].SetValue(loc.row, c + step);
        double const up = SafeFitness(fitness, probe, ctx);
        probe.trees[loc.tree].SetValue(loc.row, c - step);
        double const down = SafeFitness(fitness, probe, ctx);
        probe.trees[loc.tree].SetValue(loc.row, c);
        double const g = (up - down) / (2.0 * step);
        grad[i] = std::isfinite(g) ? g : 0.0;
    }
    return grad;
}

auto OptimizeConstantsGradient(Individual const& ind, FitnessFn const& fitness, EvalContext const& ctx,
    std::size_t epochs, AdamConfig adam) -> Individual
{
    auto cv = ExtractConstants(ind);
    if (epochs == 0 || cv.Size() == 0) {
        return ind;
    }
    Adam optimizer(cv.Size(), adam);
    for (std::size_t e = 0; e < epochs; ++e) {
        Eigen::VectorXd const grad = NumericGradient(ind, cv, fitness, ctx);
        optimizer.Step(cv.values, grad);
        if (!cv.values.allFinite()) {
            return ind;
        }
    }
    auto candidate = WithConstants(ind, cv.locations, cv.values);
    candidate.fitness = SafeFitness(fitness, candidate, ctx);
    double const original = std::isnan(ind.fitness) ? Unevaluated : ind.fitness;
    return candidate.fitness < original ? candidate : ind;
}

auto OptimizeConstantsGa(Individual const& ind, FitnessFn const& fitness, EvalContext const& ctx,
    std::size_t iterations, std::size_t gaPopulation, RngStream rng) -> Individual
{
    auto const cv = ExtractConstants(ind);
    if (iterations == 0 || gaPopulation == 0 || cv.Size() == 0) {
        return ind;
    }
    struct Member {
        Eigen::VectorXd values;
        double fitness;
    };
    auto const survivorsKept = std::max<std::size_t>(1, gaPopulation / 2);
    std::vector<Member> survivors{{cv.values, std::isnan(ind.fitness) ? Unevaluated : ind.fitness}};
    std::vector<Member> pool;
    Individual probe = ind;
    for (std::size_t it = 0; it < iterations; ++it) {
        double const progress = iterations > 1 ? static_cast<double>(it) / static_cast<double>(iterations - 1) : 1.0;
        double const sigma = 1.0 + (0.1 - 1.0) * progress;
        pool = survivors;
        for (std::size_t j = 0; j < gaPopulation; ++j) {
            auto const& parent = survivors[j % survivors.size()];
            Member child{parent.values, Unevaluated};
            for (Index k = 0; k < child.values.size(); ++k) {
                child.values[k] += rng.Normal(0.0, sigma);
            }
            InjectConstants(probe, cv.locations, child.values);
            child.fitness = SafeFitness(fitness, probe, ctx);
            pool.push_back(std::move(child));
        }
        // stable: earlier (older) members win ties
        std::stable_sort(pool.begin(), pool.end(), [](Member const& a, Member const& b) { return a.fitness < b.fitness; });
        pool.resize(std::min(pool.size(), survivorsKept));
        survivors.swap(pool);
    }
    auto const& best = survivors.front();
    if (!(best.fitness < ind.fitness)) {
        return ind;
    }
    auto out = WithConstants(ind, cv.locations, best.values);
    out.fitness = best.fitness;
    return out;
}

void ApplyConstantOptimization(Population& pop, GpConfig const& cfg, FitnessFn const& fitness, ConstOptMethod method,
    EvalContext const& ctx, RngStream const& rng)
{
    if (method == ConstOptMethod::None || cfg.coCandidates == 0 || cfg.coStepsPerCandidate == 0) {
        return;
    }
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (std::isfinite(pop[i].fitness) && ExtractConstants(pop[i]).Size() > 0) {
            order.push_back(i);
        }
    }
    std::stable_sort(order.begin(), order.end(),
        [&](std::size_t a, std::size_t b) { return FitterThan(pop[a], pop[b]); });
    order.resize(std::min(order.size(), cfg.coCandidates));

    AdamConfig adam;
    adam.learningRate = cfg.coLearningRate;
    ParallelFor(order.size(), cfg.workers, [&](std::size_t rank) {
        auto& ind = pop[order[rank]];
        if (method == ConstOptMethod::Gradient) {
            ind = OptimizeConstantsGradient(ind, fitness, ctx, cfg.coStepsPerCandidate, adam);
        } else {
            ind = OptimizeConstantsGa(ind, fitness, ctx, cfg.coStepsPerCandidate, cfg.coGaPopulation, rng.Split(rank));
        }
    });
}

} // namespace treeforge

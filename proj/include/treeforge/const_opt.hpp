// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

#include "treeforge/adam.hpp"
#include "treeforge/eval_engine.hpp"
#include "treeforge/gp_config.hpp"
#include "treeforge/individual.hpp"
#include "treeforge/rng.hpp"

namespace treeforge {

struct ConstLocation {
    std::size_t tree{0};
    Index row{0};

    friend auto operator==(ConstLocation const&, ConstLocation const&) -> bool = default;
};

/// Constants of an individual in (tree, row) order.
struct ConstVector {
    Eigen::VectorXd values;
    std::vector<ConstLocation> locations;

    [[nodiscard]] auto Size() const noexcept -> Eigen::Index { return values.size(); }
};

auto ExtractConstants(Individual const& ind) -> ConstVector;

/// Writes `values` into the constant rows listed in `locations`.
void InjectConstants(Individual& ind, std::vector<ConstLocation> const& locations,
    Eigen::Ref<Eigen::VectorXd const> const& values);

[[nodiscard]] auto WithConstants(Individual ind, std::vector<ConstLocation> const& locations,
    Eigen::Ref<Eigen::VectorXd const> const& values) -> Individual;

/// Central differences with step h * max(1, |c_i|); non-finite components are 0.
auto NumericGradient(Individual const& ind, ConstVector const& cv, FitnessFn const& fitness, EvalContext const& ctx,
    double h = 1e-4) -> Eigen::VectorXd;

/// `epochs` Adam steps on the constants. Returns the better of the input and
/// the final iterate, so the fitness never gets worse.
auto OptimizeConstantsGradient(Individual const& ind, FitnessFn const& fitness, EvalContext const& ctx,
    std::size_t epochs, AdamConfig adam = {}) -> Individual;

/// Elitist (mu + lambda) search over constant vectors: each iteration jitters
/// the surviving vectors into `gaPopulation` children (Gaussian, sigma
/// annealed linearly from 1.0 to 0.1), evaluates them and keeps the best
/// half. Uses exactly iterations * gaPopulation fitness evaluations.
auto OptimizeConstantsGa(Individual const& ind, FitnessFn const& fitness, EvalContext const& ctx,
    std::size_t iterations, std::size_t gaPopulation, RngStream rng) -> Individual;

/// Optimises the coCandidates fittest individuals (finite fitness, at least
/// one constant) in place; everyone else is untouched.
void ApplyConstantOptimization(Population& pop, GpConfig const& cfg, FitnessFn const& fitness, ConstOptMethod method,
    EvalContext const& ctx, RngStream const& rng);

} // namespace treeforge

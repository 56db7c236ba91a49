// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "treeforge/eval_engine.hpp"
#include "treeforge/gp_config.hpp"
#include "treeforge/individual.hpp"
#include "treeforge/pareto_front.hpp"
#include "treeforge/rng.hpp"

namespace treeforge {

struct GenerationStats {
    std::size_t generation{0};
    double bestFitness{Unevaluated};
    double meanFitness{Unevaluated};
    std::size_t bestComplexity{0};
};

struct RunResult {
    ParetoFront front;
    Individual best;
    std::vector<GenerationStats> history;
};

/// Called after every evaluated generation (after constant optimisation and
/// the Pareto update).
using GenerationObserver = std::function<void(GenerationStats const&, Population const&, ParetoFront const&)>;

/// Ramped half-and-half: individual i gets depth 2 + (i / 2) mod
/// (maxInitDepth - 1) and alternates grow (even i) and full (odd i).
auto InitializePopulation(GpConfig const& cfg, std::span<OperatorSet const> ops, RngStream const& rng) -> Population;

/// Index of the winner among k uniform draws with replacement. Ties go to
/// the lower complexity, then the lower population index.
auto TournamentSelect(Population const& pop, std::size_t k, RngStream& rng) -> std::size_t;

/// Indices sorted fittest first (fitness, complexity, index).
auto RankPopulation(Population const& pop) -> std::vector<std::size_t>;

/// One round of elitism plus reproduction. `rng` is this generation's stream;
/// every reproduction event draws from its own child stream.
auto EvolveGeneration(Population const& pop, GpConfig const& cfg, std::span<OperatorSet const> ops,
    RngStream const& rng) -> Population;

auto Summarize(Population const& pop, std::size_t generation) -> GenerationStats;

/// Full run: evaluate the initial population, then `generations` rounds of
/// reproduction and evaluation. `best` is the fittest individual of the final
/// population; the front collects every evaluated individual.
auto Run(GpConfig const& cfg, std::span<OperatorSet const> ops, FitnessFn const& fitness,
    GenerationObserver const& observer = {}) -> RunResult;

} // namespace treeforge

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/gp_config.hpp"

#include <cmath>

#include "treeforge/error.hpp"

namespace treeforge {

auto ParseConstOptMethod(std::string_view name) -> ConstOptMethod
{
    if (name == "none") { return ConstOptMethod::None; }
    if (name == "gradient") { return ConstOptMethod::Gradient; }
    if (name == "ga") { return ConstOptMethod::GeneticAlgorithm; }
    throw ConfigError("unknown constant optimisation method '" + std::string(name) + "' (expected ga, gradient or none)");
}

auto ToString(ConstOptMethod method) -> std::string
{
    switch (method) {
    case ConstOptMethod::None: return "none";
    case ConstOptMethod::Gradient: return "gradient";
    case ConstOptMethod::GeneticAlgorithm: return "ga";
    }
    return "none";
}

auto GpConfig::EliteCount() const -> std::size_t
{
    return static_cast<std::size_t>(std::ceil(eliteFraction * static_cast<double>(populationSize)));
}

auto GpConfig::CoBudget() const -> std::size_t
{
    switch (coMethod) {
    case ConstOptMethod::None: return 0;
    case ConstOptMethod::Gradient: return coCandidates * coStepsPerCandidate;
    case ConstOptMethod::GeneticAlgorithm: return coCandidates * coStepsPerCandidate * coGaPopulation;
    }
    return 0;
}

void GpConfig::Validate() const
{
    if (populationSize < 2) {
        throw ConfigError("population_size must be at least 2");
    }
    if (!(eliteFraction > 0.0 && eliteFraction < 1.0)) {
        throw ConfigError("elite_fraction must lie in (0, 1)");
    }
    if (tournamentSize < 1 || tournamentSize > populationSize) {
        throw ConfigError("tournament_size must lie in [1, population_size]");
    }
    if (crossoverProb < 0.0 || mutationProb < 0.0 || crossoverProb + mutationProb > 1.0) {
        throw ConfigError("crossover_prob and mutation_prob must be non-negative with sum at most 1");
    }
    if (maxInitDepth < 1 || maxDepth < maxInitDepth) {
        throw ConfigError("need 1 <= max_init_depth <= max_depth");
    }
    if (maxInitDepth >= 62 || (Index{1} << maxInitDepth) - 1 > rowCapacity) {
        throw ConfigError("full trees of max_init_depth do not fit row_capacity");
    }
    if (!(constInitLow < constInitHigh)) {
        throw ConfigError("const_init_range must satisfy low < high");
    }
    auto const& w = mutationWeights;
    for (double x : {w.operatorSwap, w.subtreeReplace, w.constantJitter, w.variableSwap, w.nodeInsert, w.nodeDelete}) {
        if (x < 0.0 || !std::isfinite(x)) {
            throw ConfigError("mutation weights must be finite and non-negative");
        }
    }
    if (w.subtreeReplace <= 0.0 && w.nodeInsert <= 0.0 && w.operatorSwap <= 0.0 && w.constantJitter <= 0.0
        && w.variableSwap <= 0.0 && w.nodeDelete <= 0.0) {
        throw ConfigError("at least one mutation weight must be positive");
    }
    if (treesPerIndividual < 1) {
        throw ConfigError("trees_per_individual must be at least 1");
    }
    if (coMethod == ConstOptMethod::GeneticAlgorithm && coCandidates > 0 && coGaPopulation < 2) {
        throw ConfigError("co_ga_population must be at least 2");
    }
    if (workers < 1) {
        throw ConfigError("workers must be at least 1");
    }
}

} // namespace treeforge

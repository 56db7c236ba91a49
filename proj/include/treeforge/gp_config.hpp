// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "treeforge/node_matrix.hpp"

namespace treeforge {

enum class ConstOptMethod : std::uint8_t { None, Gradient, GeneticAlgorithm };

auto ParseConstOptMethod(std::string_view name) -> ConstOptMethod;
auto ToString(ConstOptMethod method) -> std::string;

/// Relative weights of the mutation kinds; zero disables a kind.
struct MutationWeights {
    double operatorSwap{1.0};
    double subtreeReplace{1.0};
    double constantJitter{1.0};
    double variableSwap{1.0};
    double nodeInsert{1.0};
    double nodeDelete{1.0};
};

struct GpConfig {
    std::size_t generations{100};
    std::size_t populationSize{1000};
    double eliteFraction{0.1};
    std::size_t tournamentSize{5};
    double crossoverProb{0.7};
    double mutationProb{0.25};
    int maxInitDepth{4};
    int maxDepth{8};
    Index rowCapacity{DefaultRowCapacity};
    double constInitLow{-5.0};
    double constInitHigh{5.0};
    MutationWeights mutationWeights{};

    // constant optimisation: coCandidates individuals per generation, each
    // given coStepsPerCandidate epochs (gradient) or iterations (GA, with
    // coGaPopulation vectors per iteration)
    ConstOptMethod coMethod{ConstOptMethod::GeneticAlgorithm};
    std::size_t coCandidates{50};
    std::size_t coStepsPerCandidate{25};
    std::size_t coGaPopulation{20};
    double coLearningRate{0.05};

    std::size_t treesPerIndividual{1};
    std::uint64_t seed{0};
    std::size_t workers{1};

    [[nodiscard]] auto EliteCount() const -> std::size_t;

    /// Constant-optimisation fitness evaluations (or epochs) per generation.
    [[nodiscard]] auto CoBudget() const -> std::size_t;

    /// Throws ConfigError describing the first broken constraint.
    void Validate() const;
};

} // namespace treeforge

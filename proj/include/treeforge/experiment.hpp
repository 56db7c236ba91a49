// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treeforge/config_file.hpp"
#include "treeforge/eval_engine.hpp"
#include "treeforge/evolution.hpp"
#include "treeforge/gp_config.hpp"
#include "treeforge/operator_set.hpp"

namespace treeforge {

struct ExperimentConfig {
    std::string experiment;
    GpConfig gp;
    std::vector<std::uint64_t> seeds{0};
    std::size_t workers{1};
    std::filesystem::path outputDir{"."};
    bool writeTrace{false};

    std::size_t newtonPoints{100};
    double newtonNoise{0.05};

    /// Throws ConfigError when the name is unknown or seeds are empty.
    void Validate() const;
};

[[nodiscard]] auto ExperimentNames() -> std::span<std::string_view const>;

/// Hyperparameters for each experiment at full scale.
auto DefaultExperimentConfig(std::string_view name) -> ExperimentConfig;

/// Needs experiment.name; every other key overrides the defaults.
auto ConfigFromEntries(std::vector<ConfigEntry> const& entries) -> ExperimentConfig;

auto LoadConfig(std::filesystem::path const& path) -> ExperimentConfig;

/// Operator sets (one per tree) and fitness for a seed. Data generation is
/// seeded from the same seed as the run.
struct ProblemSetup {
    std::vector<OperatorSet> ops;
    FitnessFn fitness;
};

auto MakeProblem(ExperimentConfig const& cfg, std::uint64_t seed) -> ProblemSetup;

/// GpConfig for one seed: seed and worker count filled in.
[[nodiscard]] auto SeedConfig(ExperimentConfig const& cfg, std::uint64_t seed) -> GpConfig;

struct SeedOutcome {
    std::uint64_t seed{0};
    bool ok{false};
    std::string error;
    double bestFitness{0.0};
    std::size_t bestSize{0};
};

struct ExperimentResult {
    std::vector<SeedOutcome> seeds;
    double wallTimeSeconds{0.0};
    std::filesystem::path summaryPath;
};

using ProgressFn = std::function<void(std::uint64_t seed, GenerationStats const&)>;

/// Runs every seed and writes <name>_seed<k>_history.csv,
/// <name>_seed<k>_pareto.csv and <name>_summary.json into outputDir.
/// A failing seed is recorded and the rest continue.
auto RunExperiment(ExperimentConfig const& cfg, ProgressFn const& progress = {}) -> ExperimentResult;

[[nodiscard]] auto HistoryCsv(std::span<GenerationStats const> history) -> std::string;
[[nodiscard]] auto ParetoCsv(ParetoFront const& front, std::span<OperatorSet const> ops) -> std::string;

/// Mean and population standard deviation over successful seeds.
[[nodiscard]] auto SummaryJson(std::string_view experiment, std::span<SeedOutcome const> seeds, double wallTimeSeconds)
    -> std::string;

/// Worker count after the TREEFORGE_WORKERS environment override.
[[nodiscard]] auto ResolveWorkers(std::size_t configured) -> std::size_t;

} // namespace treeforge

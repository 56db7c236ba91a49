// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>

#include <json.hpp>

#include "treeforge/acrobot.hpp"
#include "treeforge/datasets.hpp"
#include "treeforge/error.hpp"
#include "treeforge/individual.hpp"
#include "treeforge/lotka_volterra.hpp"
#include "treeforge/meta_loss.hpp"

namespace treeforge {

namespace {

constexpr std::array<std::string_view, 8> Names{
    "kepler", "newton", "bode", "lv_full", "lv_partial", "acrobot", "loss_small", "loss_big"};

auto JoinedNames() -> std::string
{
    std::string out;
    for (auto name : Names) {
        out += out.empty() ? "" : ", ";
        out += name;
    }
    return out;
}

auto IsKnown(std::string_view name) -> bool { return std::ranges::find(Names, name) != Names.end(); }

template <typename T>
auto ParseNumber(std::string const& text) -> T
{
    T value{};
    auto const* end = text.data() + text.size();
    auto const [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("invalid value '" + text + "'");
    }
    return value;
}

auto ParseBool(std::string const& text) -> bool
{
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw ConfigError("invalid boolean '" + text + "'");
}

/// Comma-separated integers and inclusive ranges, e.g. "0-4,7".
auto ParseSeeds(std::string const& text) -> std::vector<std::uint64_t>
{
    std::vector<std::uint64_t> seeds;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto const comma = std::min(text.find(',', pos), text.size());
        std::string item = text.substr(pos, comma - pos);
        std::erase(item, ' ');
        pos = comma + 1;
        if (item.empty()) {
            throw ConfigError("empty seed in list '" + text + "'");
        }
        auto const dash = item.find('-');
        if (dash == std::string::npos) {
            seeds.push_back(ParseNumber<std::uint64_t>(item));
            continue;
        }
        auto const lo = ParseNumber<std::uint64_t>(item.substr(0, dash));
        auto const hi = ParseNumber<std::uint64_t>(item.substr(dash + 1));
        if (hi < lo) {
            throw ConfigError("descending seed range '" + item + "'");
        }
        for (auto s = lo; s <= hi; ++s) {
            seeds.push_back(s);
        }
    }
    return seeds;
}

template <typename T>
auto Count(T& field)
{
    return [&field](std::string const& v) { field = ParseNumber<T>(v); };
}

using Setter = std::function<void(std::string const&)>;

auto Setters(ExperimentConfig& cfg) -> std::map<std::string, Setter>
{
    auto& gp = cfg.gp;
    auto& w = gp.mutationWeights;
    return {
        {"experiment.seeds", [&cfg](std::string const& v) { cfg.seeds = ParseSeeds(v); }},
        {"experiment.workers", Count(cfg.workers)},
        {"experiment.out", [&cfg](std::string const& v) { cfg.outputDir = v; }},
        {"experiment.trace", [&cfg](std::string const& v) { cfg.writeTrace = ParseBool(v); }},
        {"gp.generations", Count(gp.generations)},
        {"gp.population_size", Count(gp.populationSize)},
        {"gp.elite_fraction", Count(gp.eliteFraction)},
        {"gp.tournament_size", Count(gp.tournamentSize)},
        {"gp.crossover_prob", Count(gp.crossoverProb)},
        {"gp.mutation_prob", Count(gp.mutationProb)},
        {"gp.max_init_depth", Count(gp.maxInitDepth)},
        {"gp.max_depth", Count(gp.maxDepth)},
        {"gp.row_capacity", Count(gp.rowCapacity)},
        {"gp.const_init_low", Count(gp.constInitLow)},
        {"gp.const_init_high", Count(gp.constInitHigh)},
        {"gp.co_method", [&gp](std::string const& v) { gp.coMethod = ParseConstOptMethod(v); }},
        {"gp.co_candidates", Count(gp.coCandidates)},
        {"gp.co_steps_per_candidate", Count(gp.coStepsPerCandidate)},
        {"gp.co_ga_population", Count(gp.coGaPopulation)},
        {"gp.co_learning_rate", Count(gp.coLearningRate)},
        {"gp.weight_operator_swap", Count(w.operatorSwap)},
        {"gp.weight_subtree_replace", Count(w.subtreeReplace)},
        {"gp.weight_constant_jitter", Count(w.constantJitter)},
        {"gp.weight_variable_swap", Count(w.variableSwap)},
        {"gp.weight_node_insert", Count(w.nodeInsert)},
        {"gp.weight_node_delete", Count(w.nodeDelete)},
        {"problem.newton_points", Count(cfg.newtonPoints)},
        {"problem.newton_noise", Count(cfg.newtonNoise)},
    };
}

auto DatasetOperators(Dataset const& data) -> OperatorSet
{
    std::vector<std::string> const ops{"+", "-", "*", "/", "pow"};
    return BuildOperatorSet(ops, static_cast<std::size_t>(data.X.cols()), data.names);
}

auto DatasetProblem(Dataset data) -> ProblemSetup
{
    auto shared = std::make_shared<Dataset const>(std::move(data));
    auto ops = DatasetOperators(*shared);
    return {{ops}, [shared, ops](Individual const& ind, EvalContext const&) {
                return EvaluateOnDataset(ind.trees.front(), ops, shared->X, shared->Y);
            }};
}

auto FormatDouble(double v) -> std::string
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

auto CsvField(std::string const& s) -> std::string
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

void WriteFile(std::filesystem::path const& path, std::string const& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out << content;
    if (!out) {
        throw Error("failed writing '" + path.string() + "'");
    }
}

auto TraceCsv(RolloutResult const& rollout) -> std::string
{
    std::string out = "step,theta1,theta2,omega1,omega2,torque\n";
    for (auto const& row : rollout.trace) {
        out += std::to_string(row.step) + ',' + FormatDouble(row.state.theta1) + ',' + FormatDouble(row.state.theta2) +
            ',' + FormatDouble(row.state.omega1) + ',' + FormatDouble(row.state.omega2) + ',' +
            std::to_string(row.torque) + '\n';
    }
    return out;
}

} // namespace

void ExperimentConfig::Validate() const
{
    if (!IsKnown(experiment)) {
        throw ConfigError("unknown experiment '" + experiment + "' (valid: " + JoinedNames() + ")");
    }
    if (seeds.empty()) {
        throw ConfigError("seeds must not be empty");
    }
    if (workers == 0) {
        throw ConfigError("workers must be at least 1");
    }
    if (newtonPoints == 0 || !(newtonNoise >= 0.0)) {
        throw ConfigError("newton problem needs points > 0 and noise >= 0");
    }
    gp.Validate();
}

auto ExperimentNames() -> std::span<std::string_view const> { return Names; }

auto DefaultExperimentConfig(std::string_view name) -> ExperimentConfig
{
    if (!IsKnown(name)) {
        throw ConfigError("unknown experiment '" + std::string(name) + "' (valid: " + JoinedNames() + ")");
    }
    ExperimentConfig cfg;
    cfg.experiment = std::string(name);
    auto& gp = cfg.gp;
    gp.generations = 100;
    gp.populationSize = 1000;
    gp.coMethod = ConstOptMethod::GeneticAlgorithm;
    gp.coCandidates = 50;
    gp.coStepsPerCandidate = 25;
    gp.coGaPopulation = 20;
    if (name == "lv_full" || name == "lv_partial") {
        gp.treesPerIndividual = 2;
    }
    if (name == "lv_partial") {
        gp.populationSize = 2000;
        gp.coCandidates = 200;
    }
    if (name == "acrobot") {
        gp.generations = 50;
        gp.populationSize = 500;
        gp.coMethod = ConstOptMethod::None;
    }
    if (name == "loss_small" || name == "loss_big") {
        gp.generations = 50;
        gp.populationSize = name == "loss_small" ? 250 : 1000;
        gp.coMethod = ConstOptMethod::None;
    }
    return cfg;
}

auto ConfigFromEntries(std::vector<ConfigEntry> const& entries) -> ExperimentConfig
{
    auto const named = std::ranges::find_if(
        entries, [](ConfigEntry const& e) { return e.section == "experiment" && e.key == "name"; });
    if (named == entries.end()) {
        throw ConfigError("missing [experiment] name");
    }
    ExperimentConfig cfg;
    try {
        cfg = DefaultExperimentConfig(named->value);
    } catch (ConfigError const& e) {
        throw ConfigError(e.what(), named->line);
    }
    auto setters = Setters(cfg);
    for (auto const& entry : entries) {
        if (&entry == &*named) {
            continue;
        }
        auto const it = setters.find(entry.section + "." + entry.key);
        if (it == setters.end()) {
            throw ConfigError("unknown key '" + entry.key + "' in [" + entry.section + "]", entry.line);
        }
        try {
            it->second(entry.value);
        } catch (ConfigError const& e) {
            throw ConfigError(std::string(e.what()) + " for '" + entry.key + "'", entry.line);
        } catch (Error const& e) {
            throw ConfigError(std::string(e.what()) + " for '" + entry.key + "'", entry.line);
        }
    }
    cfg.Validate();
    return cfg;
}

auto LoadConfig(std::filesystem::path const& path) -> ExperimentConfig { return ConfigFromEntries(ReadConfigFile(path)); }

auto MakeProblem(ExperimentConfig const& cfg, std::uint64_t seed) -> ProblemSetup
{
    auto const data = RngStream(seed).Split("data");
    auto const& name = cfg.experiment;
    if (name == "kepler") {
        return DatasetProblem(GenKepler());
    }
    if (name == "newton") {
        return DatasetProblem(GenNewton(cfg.newtonPoints, cfg.newtonNoise, data));
    }
    if (name == "bode") {
        return DatasetProblem(GenBode());
    }
    if (name == "lv_full" || name == "lv_partial") {
        auto problem = std::make_shared<LotkaVolterraProblem const>(data);
        bool const full = name == "lv_full";
        auto ops = full ? LotkaVolterraProblem::FullOperators() : LotkaVolterraProblem::PartialOperators();
        FitnessFn fitness = full ? FitnessFn([problem, ops](Individual const& ind, EvalContext const&) {
            return problem->FullyObservedFitness(ind, ops);
        })
                                 : FitnessFn([problem, ops](Individual const& ind, EvalContext const&) {
                                       return problem->PartialFitness(ind, ops);
                                   });
        return {{ops}, std::move(fitness)};
    }
    if (name == "acrobot") {
        auto ops = AcrobotOperators();
        return {{ops}, [ops](Individual const& ind, EvalContext const& ctx) { return AcrobotFitness(ind, ops, ctx); }};
    }
    if (name == "loss_small" || name == "loss_big") {
        auto ops = LossOperators();
        auto const scale = name == "loss_small" ? LossScale::Small : LossScale::Big;
        return {{ops}, [ops, scale](Individual const& ind, EvalContext const& ctx) {
                    return LossFnFitness(ind, ops, scale, ctx);
                }};
    }
    throw ConfigError("unknown experiment '" + name + "' (valid: " + JoinedNames() + ")");
}

auto SeedConfig(ExperimentConfig const& cfg, std::uint64_t seed) -> GpConfig
{
    GpConfig gp = cfg.gp;
    gp.seed = seed;
    gp.workers = cfg.workers;
    return gp;
}

auto HistoryCsv(std::span<GenerationStats const> history) -> std::string
{
    std::string out = "generation,best_fitness,mean_fitness,best_complexity\n";
    for (auto const& s : history) {
        out += std::to_string(s.generation) + ',' + FormatDouble(s.bestFitness) + ',' + FormatDouble(s.meanFitness) +
            ',' + std::to_string(s.bestComplexity) + '\n';
    }
    return out;
}

auto ParetoCsv(ParetoFront const& front, std::span<OperatorSet const> ops) -> std::string
{
    std::string out = "complexity,fitness,expression\n";
    for (auto const& [complexity, entry] : front.Entries()) {
        out += std::to_string(complexity) + ',' + FormatDouble(entry.fitness) + ',' +
            CsvField(ToInfix(entry.individual, ops)) + '\n';
    }
    return out;
}

auto SummaryJson(std::string_view experiment, std::span<SeedOutcome const> seeds, double wallTimeSeconds) -> std::string
{
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    auto list = nlohmann::ordered_json::array();
    auto failed = nlohmann::ordered_json::array();
    double fitSum = 0.0;
    double sizeSum = 0.0;
    std::size_t n = 0;
    for (auto const& s : seeds) {
        if (s.ok) {
            list.push_back(s.seed);
            fitSum += s.bestFitness;
            sizeSum += static_cast<double>(s.bestSize);
            ++n;
        } else {
            failed.push_back({{"seed", s.seed}, {"error", s.error}});
        }
    }
    double const count = static_cast<double>(n);
    double const fitMean = n > 0 ? fitSum / count : std::nan("");
    double const sizeMean = n > 0 ? sizeSum / count : std::nan("");
    double fitVar = 0.0;
    double sizeVar = 0.0;
    for (auto const& s : seeds) {
        if (s.ok) {
            fitVar += (s.bestFitness - fitMean) * (s.bestFitness - fitMean);
            sizeVar += (static_cast<double>(s.bestSize) - sizeMean) * (static_cast<double>(s.bestSize) - sizeMean);
        }
    }
    j["seeds"] = std::move(list);
    j["failed_seeds"] = std::move(failed);
    auto number = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(); };
    j["fitness_mean"] = number(fitMean);
    j["fitness_std"] = number(n > 0 ? std::sqrt(fitVar / count) : std::nan(""));
    j["size_mean"] = number(sizeMean);
    j["size_std"] = number(n > 0 ? std::sqrt(sizeVar / count) : std::nan(""));
    j["wall_time_s"] = wallTimeSeconds;
    return j.dump(2) + '\n';
}

auto ResolveWorkers(std::size_t configured) -> std::size_t
{
    if (char const* env = std::getenv("TREEFORGE_WORKERS"); env != nullptr && *env != '\0') {
        auto const value = ParseNumber<std::size_t>(env);
        if (value == 0) {
            throw ConfigError("TREEFORGE_WORKERS must be at least 1");
        }
        return value;
    }
    return configured;
}

auto RunExperiment(ExperimentConfig const& cfg, ProgressFn const& progress) -> ExperimentResult
{
    cfg.Validate();
    std::filesystem::create_directories(cfg.outputDir);
    auto const start = std::chrono::steady_clock::now();
    ExperimentResult result;
    for (auto const seed : cfg.seeds) {
        SeedOutcome outcome{seed, false, {}, 0.0, 0};
        try {
            auto const problem = MakeProblem(cfg, seed);
            auto const gp = SeedConfig(cfg, seed);
            GenerationObserver observer;
            if (progress) {
                observer = [&](GenerationStats const& s, Population const&, ParetoFront const&) { progress(seed, s); };
            }
            auto const run = Run(gp, problem.ops, problem.fitness, observer);
            auto const stem = cfg.experiment + "_seed" + std::to_string(seed);
            WriteFile(cfg.outputDir / (stem + "_history.csv"), HistoryCsv(run.history));
            WriteFile(cfg.outputDir / (stem + "_pareto.csv"), ParetoCsv(run.front, problem.ops));
            if (cfg.writeTrace && cfg.experiment == "acrobot") {
                auto const starts = AcrobotStarts(EvalContext{seed, gp.generations});
                auto const rollout = AcrobotRollout(run.best.trees.front(), problem.ops.front(), starts.front(), true);
                WriteFile(cfg.outputDir / (stem + "_trace.csv"), TraceCsv(rollout));
            }
            outcome.ok = true;
            outcome.bestFitness = run.best.fitness;
            outcome.bestSize = Complexity(run.best);
        } catch (std::exception const& e) {
            outcome.error = e.what();
        }
        result.seeds.push_back(std::move(outcome));
    }
    result.wallTimeSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.summaryPath = cfg.outputDir / (cfg.experiment + "_summary.json");
    WriteFile(result.summaryPath, SummaryJson(cfg.experiment, result.seeds, result.wallTimeSeconds));
    return result;
}

} // namespace treeforge

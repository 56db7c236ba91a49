// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treeforge/const_opt.hpp"
#include "treeforge/error.hpp"
#include "treeforge/variation.hpp"

namespace treeforge {

namespace {

auto Better(Population const& pop, std::size_t a, std::size_t b) -> bool
{
    auto const& x = pop[a];
    auto const& y = pop[b];
    if (x.fitness != y.fitness) {
        return x.fitness < y.fitness;
    }
    auto const cx = Complexity(x);
    auto const cy = Complexity(y);
    if (cx != cy) {
        return cx < cy;
    }
    return a < b;
}

auto Offspring(Individual const& parent) -> Individual
{
    return Individual{parent.trees, Unevaluated};
}

} // namespace

auto InitializePopulation(GpConfig const& cfg, std::span<OperatorSet const> ops, RngStream const& rng) -> Population
{
    cfg.Validate();
    Population pop(cfg.populationSize);
    auto const depthLevels = static_cast<std::size_t>(std::max(1, cfg.maxInitDepth - 1));
    for (std::size_t i = 0; i < pop.size(); ++i) {
        auto stream = rng.Split(i);
        int const depth = std::min(cfg.maxInitDepth, 2 + static_cast<int>((i / 2) % depthLevels));
        auto const method = i % 2 == 0 ? InitMethod::Grow : InitMethod::Full;
        for (std::size_t t = 0; t < cfg.treesPerIndividual; ++t) {
            pop[i].trees.push_back(GenerateTree(OpsForTree(ops, t), depth, method, cfg.constInitLow, cfg.constInitHigh,
                cfg.rowCapacity, stream));
        }
    }
    return pop;
}

auto TournamentSelect(Population const& pop, std::size_t k, RngStream& rng) -> std::size_t
{
    std::size_t best = rng.Index(pop.size());
    for (std::size_t draw = 1; draw < k; ++draw) {
        auto const candidate = rng.Index(pop.size());
        if (Better(pop, candidate, best)) {
            best = candidate;
        }
    }
    return best;
}

auto RankPopulation(Population const& pop) -> std::vector<std::size_t>
{
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return Better(pop, a, b); });
    return order;
}

auto EvolveGeneration(Population const& pop, GpConfig const& cfg, std::span<OperatorSet const> ops,
    RngStream const& rng) -> Population
{
    auto const n = cfg.populationSize;
    auto const elites = std::min(cfg.EliteCount(), n);
    auto const limits = LimitsOf(cfg);
    Population next;
    next.reserve(n);
    auto const ranked = RankPopulation(pop);
    for (std::size_t e = 0; e < elites && e < ranked.size(); ++e) {
        next.push_back(pop[ranked[e]]);
    }
    while (next.size() < n) {
        auto stream = rng.Split(next.size());
        double const u = stream.Uniform();
        if (u < cfg.crossoverProb) {
            auto childA = Offspring(pop[TournamentSelect(pop, cfg.tournamentSize, stream)]);
            auto childB = Offspring(pop[TournamentSelect(pop, cfg.tournamentSize, stream)]);
            auto const t = stream.Index(childA.trees.size());
            auto [a, b] = Crossover(childA.trees[t], childB.trees[t], limits, stream);
            childA.trees[t] = std::move(a);
            childB.trees[t] = std::move(b);
            // uniform exchange of the remaining trees
            for (std::size_t j = 0; j < childA.trees.size(); ++j) {
                if (j != t && stream.Bernoulli(0.5)) {
                    std::swap(childA.trees[j], childB.trees[j]);
                }
            }
            next.push_back(std::move(childA));
            if (next.size() < n) {
                next.push_back(std::move(childB));
            }
        } else if (u < cfg.crossoverProb + cfg.mutationProb) {
            auto child = Offspring(pop[TournamentSelect(pop, cfg.tournamentSize, stream)]);
            auto const t = stream.Index(child.trees.size());
            child.trees[t] = Mutate(child.trees[t], OpsForTree(ops, t), cfg, stream);
            next.push_back(std::move(child));
        } else {
            // reproduction by copy keeps the parent's score
            next.push_back(pop[TournamentSelect(pop, cfg.tournamentSize, stream)]);
        }
    }
    return next;
}

auto Summarize(Population const& pop, std::size_t generation) -> GenerationStats
{
    GenerationStats stats;
    stats.generation = generation;
    if (pop.empty()) {
        return stats;
    }
    auto const ranked = RankPopulation(pop);
    auto const& best = pop[ranked.front()];
    stats.bestFitness = best.fitness;
    stats.bestComplexity = Complexity(best);
    double sum = 0.0;
    std::size_t finite = 0;
    for (auto const& ind : pop) {
        if (std::isfinite(ind.fitness)) {
            sum += ind.fitness;
            ++finite;
        }
    }
    stats.meanFitness = finite > 0 ? sum / static_cast<double>(finite) : Unevaluated;
    return stats;
}

auto Run(GpConfig const& cfg, std::span<OperatorSet const> ops, FitnessFn const& fitness,
    GenerationObserver const& observer) -> RunResult
{
    cfg.Validate();
    if (ops.size() != 1 && ops.size() != cfg.treesPerIndividual) {
        throw ConfigError("need one operator set, or one per tree");
    }
    RngStream const root(cfg.seed);
    RunResult result;
    auto pop = InitializePopulation(cfg, ops, root.Split("init"));
    for (std::size_t g = 0;; ++g) {
        EvalContext const ctx{cfg.seed, g};
        BatchEvaluate(pop, fitness, ctx, cfg.workers);
        ApplyConstantOptimization(pop, cfg, fitness, cfg.coMethod, ctx, root.Split("const-opt").Split(g));
        for (auto const& ind : pop) {
            result.front.Update(ind);
        }
        auto stats = Summarize(pop, g);
        result.history.push_back(stats);
        if (observer) {
            observer(stats, pop, result.front);
        }
        if (g == cfg.generations) {
            break;
        }
        pop = EvolveGeneration(pop, cfg, ops, root.Split("reproduce").Split(g));
    }
    result.best = pop[RankPopulation(pop).front()];
    return result;
}

} // namespace treeforge

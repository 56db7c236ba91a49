// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "test_support.hpp"
#include "treeforge/evolution.hpp"
#include "treeforge/infix.hpp"
#include "treeforge/interpreter.hpp"
#include "treeforge/pareto_front.hpp"
#include "treeforge/tree.hpp"
#include "treeforge/variation.hpp"

using namespace treeforge;
using T = RecursiveTree;

namespace {

auto SmallConfig() -> GpConfig
{
    GpConfig cfg;
    cfg.populationSize = 60;
    cfg.generations = 5;
    cfg.coMethod = ConstOptMethod::None;
    return cfg;
}

auto WithFitness(NodeMatrixd m, double f) -> Individual
{
    Individual ind;
    ind.trees.push_back(std::move(m));
    ind.fitness = f;
    return ind;
}

auto ComplexityFitness() -> FitnessFn
{
    return [](Individual const& ind, EvalContext const&) { return static_cast<double>(Complexity(ind)); };
}

} // namespace

TEST_SUITE("evolution")
{
    TEST_CASE("config validation")
    {
        GpConfig cfg;
        CHECK_NOTHROW(cfg.Validate());
        CHECK(cfg.EliteCount() == 100);
        CHECK(cfg.CoBudget() == 25000);
        auto bad = cfg;
        bad.eliteFraction = 1.0;
        CHECK_THROWS(bad.Validate());
        bad = cfg;
        bad.crossoverProb = 0.8;
        bad.mutationProb = 0.3;
        CHECK_THROWS(bad.Validate());
        bad = cfg;
        bad.maxInitDepth = 6;
        CHECK_THROWS(bad.Validate());
        bad = cfg;
        bad.tournamentSize = 2000;
        CHECK_THROWS(bad.Validate());
    }

    TEST_CASE("initial population")
    {
        auto const ops = BuildOperatorSet({"+", "-", "*", "/", "pow"}, 2);
        std::vector<OperatorSet> const set{ops};
        GpConfig cfg;
        auto const pop = InitializePopulation(cfg, set, RngStream(1));
        REQUIRE(pop.size() == 1000);
        std::set<int> depths;
        for (auto const& ind : pop) {
            CHECK(std::isinf(ind.fitness));
            REQUIRE(ind.trees.size() == 1);
            CHECK(!Validate(ind.trees[0], ops));
            CHECK(Depth(ind.trees[0]) <= cfg.maxInitDepth);
            depths.insert(Depth(ind.trees[0]));
        }
        CHECK(depths.count(2) == 1);
        CHECK(depths.count(4) == 1);

        cfg.maxInitDepth = 2;
        for (auto const& ind : InitializePopulation(cfg, set, RngStream(2))) {
            CHECK(Complexity(ind) <= 3);
        }

        auto const again = InitializePopulation(GpConfig{}, set, RngStream(1));
        for (std::size_t i = 0; i < pop.size(); ++i) {
            CHECK(again[i].trees[0] == pop[i].trees[0]);
        }
    }

    TEST_CASE("multi-tree individuals use one operator set per tree")
    {
        std::vector<OperatorSet> const sets{BuildOperatorSet({"+"}, 2), BuildOperatorSet({"*", "-"}, 2)};
        GpConfig cfg = SmallConfig();
        cfg.treesPerIndividual = 2;
        for (auto const& ind : InitializePopulation(cfg, sets, RngStream(3))) {
            REQUIRE(ind.trees.size() == 2);
            CHECK(!Validate(ind.trees[0], sets[0]));
            CHECK(!Validate(ind.trees[1], sets[1]));
            CHECK(Complexity(ind) == Complexity(ind.trees[0]) + Complexity(ind.trees[1]));
        }
    }

    TEST_CASE("tournament selection")
    {
        auto const ops = BuildOperatorSet({"+"}, 1);
        Population pop;
        for (int i = 0; i < 20; ++i) {
            pop.push_back(WithFitness(Encode(T::Constant(i), ops), 20.0 - i));
        }
        RngStream rng(4);
        // k = N with replacement may miss the best; with k large it is found
        std::size_t hits = 0;
        for (int i = 0; i < 100; ++i) {
            hits += TournamentSelect(pop, 200, rng) == 19 ? 1 : 0;
        }
        CHECK(hits == 100);

        std::vector<int> counts(20, 0);
        for (int i = 0; i < 20000; ++i) {
            ++counts[TournamentSelect(pop, 1, rng)];
        }
        for (int c : counts) {
            CHECK(c > 800);
            CHECK(c < 1200);
        }

        auto const small = Encode(T::Op(ops, "+", {T::Variable(ops, 0), T::Constant(1.0)}), ops);
        auto const big = Encode(T::Op(ops, "+",
                                    {T::Op(ops, "+", {T::Variable(ops, 0), T::Constant(1.0)}),
                                        T::Op(ops, "+", {T::Op(ops, "+", {T::Variable(ops, 0), T::Constant(1.0)}), T::Constant(2.0)})}),
            ops);
        REQUIRE(Complexity(small) == 3);
        REQUIRE(Complexity(big) == 9);
        Population tie{WithFitness(big, 1.0), WithFitness(small, 1.0)};
        for (int i = 0; i < 50; ++i) {
            CHECK(TournamentSelect(tie, 8, rng) == 1);
        }
    }

    TEST_CASE("crossover at both roots swaps the parents")
    {
        auto const ops = testing::CatalogOperators(2);
        RngStream rng(6);
        for (int i = 0; i < 50; ++i) {
            auto const a = Encode(testing::RandomTree(ops, 4, rng), ops);
            auto const b = Encode(testing::RandomTree(ops, 4, rng), ops);
            auto const [ca, cb] = CrossoverAt(a, b, a.Rows() - 1, b.Rows() - 1, ShapeLimits{});
            CHECK(ca == b);
            CHECK(cb == a);
        }
    }

    TEST_CASE("crossover matches the recursive subtree swap")
    {
        auto const ops = testing::CatalogOperators(2);
        ShapeLimits const limits{32, 8};
        RngStream rng(7);
        for (int i = 0; i < 3000; ++i) {
            auto ta = testing::RandomTree(ops, 5, rng);
            auto tb = testing::RandomTree(ops, 5, rng);
            auto const a = Encode(ta, ops);
            auto const b = Encode(tb, ops);
            auto const ia = rng.Index(Complexity(a));
            auto const ib = rng.Index(Complexity(b));
            auto const rowA = a.Rows() - static_cast<Index>(Complexity(a)) + static_cast<Index>(ia);
            auto const rowB = b.Rows() - static_cast<Index>(Complexity(b)) + static_cast<Index>(ib);

            auto expectA = ta;
            auto expectB = tb;
            auto const subA = *testing::PostOrderNodes(ta)[ia];
            auto const subB = *testing::PostOrderNodes(tb)[ib];
            *testing::PostOrderNodes(expectA)[ia] = subB;
            *testing::PostOrderNodes(expectB)[ib] = subA;
            auto fits = [&](T const& t) { return t.Size() <= 32 && t.Depth() <= 8; };

            auto const [ca, cb] = CrossoverAt(a, b, rowA, rowB, limits);
            REQUIRE(!Validate(ca, ops));
            REQUIRE(!Validate(cb, ops));
            CHECK(Decode(ca, ops) == (fits(expectA) ? expectA : ta));
            CHECK(Decode(cb, ops) == (fits(expectB) ? expectB : tb));
        }
    }

    TEST_CASE("oversized crossover children are replaced by the parent")
    {
        auto const ops = BuildOperatorSet({"+"}, 1);
        RngStream rng(1);
        auto const deep = GenerateTree(ops, 4, InitMethod::Full, -1, 1, 32, rng);
        REQUIRE(Complexity(deep) == 15);
        auto const leaf = Encode(T::Variable(ops, 0), ops);
        ShapeLimits const roomy{16, 8};
        auto const [ca, cb] = CrossoverAt(leaf, deep, leaf.Rows() - 1, deep.Rows() - 1, roomy);
        CHECK(Decode(ca, ops) == Decode(deep, ops));
        CHECK(cb == leaf);
        ShapeLimits const tight{14, 8};
        auto const [ta, tb] = CrossoverAt(leaf, deep, leaf.Rows() - 1, deep.Rows() - 1, tight);
        CHECK(ta == leaf);
        CHECK(tb == leaf);
        ShapeLimits const shallow{32, 3};
        auto const [da, db] = CrossoverAt(leaf, deep, leaf.Rows() - 1, deep.Rows() - 1, shallow);
        CHECK(da == leaf);
        CHECK(db == leaf);
    }

    TEST_CASE("mutation examples")
    {
        auto const ops = BuildOperatorSet({"+", "*"}, 2);
        GpConfig const cfg;
        RngStream rng(12);
        auto const prod = Encode(T::Op(ops, "*", {T::Variable(ops, 0), T::Variable(ops, 1)}), ops);
        auto const swapped = MutateWith(MutationKind::OperatorSwap, prod, ops, cfg, rng);
        REQUIRE(swapped);
        CHECK(ToInfix(*swapped, ops) == "(y1 + y2)");

        auto const leaf = Encode(T::Constant(0.5), ops);
        for (int i = 0; i < 100; ++i) {
            auto const j = MutateWith(MutationKind::ConstantJitter, leaf, ops, cfg, rng);
            REQUIRE(j);
            CHECK(Complexity(*j) == 1);
            CHECK(j->Function(j->Rows() - 1) == OperatorSet::ConstantIndex);
            CHECK(j->Value(j->Rows() - 1) > 0.0);
        }

        CHECK(!MutateWith(MutationKind::NodeDelete, leaf, ops, cfg, rng));
        auto const del = MutateWith(MutationKind::NodeDelete, prod, ops, cfg, rng);
        REQUIRE(del);
        CHECK(Complexity(*del) == 1);

        auto const ins = MutateWith(MutationKind::NodeInsert, leaf, ops, cfg, rng);
        REQUIRE(ins);
        CHECK(Complexity(*ins) > 1);
        CHECK(!Validate(*ins, ops));

        auto const vs = MutateWith(MutationKind::VariableSwap, prod, ops, cfg, rng);
        REQUIRE(vs);
        auto const text = ToInfix(*vs, ops);
        CHECK((text == "(y1 * y1)" || text == "(y2 * y2)"));
    }

    TEST_CASE("mutation fuzz keeps matrices valid and within limits")
    {
        auto const ops = testing::CatalogOperators(3);
        GpConfig const cfg;
        RngStream rng(13);
        for (int i = 0; i < 5000; ++i) {
            auto const m = GenerateTree(ops, 2 + static_cast<int>(rng.Index(3)), rng.Bernoulli(0.5) ? InitMethod::Grow : InitMethod::Full,
                -5, 5, cfg.rowCapacity, rng);
            auto const out = Mutate(m, ops, cfg, rng);
            REQUIRE(!Validate(out, ops));
            CHECK(WithinLimits(out, LimitsOf(cfg)));
            CHECK(IsPostOrderPacked(out));
        }
    }

    TEST_CASE("evolve generation keeps elites and size")
    {
        auto const ops = BuildOperatorSet({"+", "-", "*"}, 1);
        std::vector<OperatorSet> const set{ops};
        GpConfig cfg = SmallConfig();
        cfg.populationSize = 1000;
        auto pop = InitializePopulation(cfg, set, RngStream(20));
        for (std::size_t i = 0; i < pop.size(); ++i) {
            pop[i].fitness = static_cast<double>((i * 7919) % 1000);
        }
        auto const next = EvolveGeneration(pop, cfg, set, RngStream(21));
        REQUIRE(next.size() == 1000);
        auto const ranked = RankPopulation(pop);
        for (std::size_t e = 0; e < 100; ++e) {
            CHECK(next[e].trees[0] == pop[ranked[e]].trees[0]);
            CHECK(next[e].fitness == pop[ranked[e]].fitness);
        }
        for (auto const& ind : next) {
            CHECK(!Validate(ind.trees[0], ops));
        }

        cfg.crossoverProb = 0.0;
        cfg.mutationProb = 0.0;
        auto const copies = EvolveGeneration(pop, cfg, set, RngStream(22));
        REQUIRE(copies.size() == 1000);
        for (auto const& ind : copies) {
            bool const found = std::any_of(pop.begin(), pop.end(), [&](Individual const& p) {
                return p.trees[0] == ind.trees[0] && p.fitness == ind.fitness;
            });
            CHECK(found);
        }
    }

    TEST_CASE("run with zero generations returns the best initial individual")
    {
        auto const ops = BuildOperatorSet({"+", "*"}, 1);
        std::vector<OperatorSet> const set{ops};
        GpConfig cfg = SmallConfig();
        cfg.generations = 0;
        auto const result = Run(cfg, set, ComplexityFitness());
        REQUIRE(result.history.size() == 1);
        auto const pop = InitializePopulation(cfg, set, RngStream(cfg.seed).Split("init"));
        std::size_t smallest = 1000;
        for (auto const& ind : pop) {
            smallest = std::min(smallest, Complexity(ind));
        }
        CHECK(result.best.fitness == static_cast<double>(smallest));
    }

    TEST_CASE("complexity objective converges to a single leaf")
    {
        auto const ops = BuildOperatorSet({"+", "*"}, 1);
        std::vector<OperatorSet> const set{ops};
        GpConfig cfg = SmallConfig();
        cfg.generations = 15;
        cfg.maxInitDepth = 4;
        auto const result = Run(cfg, set, ComplexityFitness());
        CHECK(Complexity(result.best) == 1);
        CHECK(result.best.fitness == 1.0);
    }

    TEST_CASE("run history is monotone and the front strictly decreasing")
    {
        auto const ops = BuildOperatorSet({"+", "-", "*", "/"}, 1);
        std::vector<OperatorSet> const set{ops};
        GpConfig cfg = SmallConfig();
        cfg.generations = 10;
        FitnessFn const fit = [&](Individual const& ind, EvalContext const&) {
            double err = 0.0;
            for (int i = 0; i < 10; ++i) {
                double const x = 0.3 * i;
                std::vector<double> const in{x};
                err += std::abs(Evaluate(ind.trees[0], ops, std::span<double const>(in)) - (x * x + 1.0));
            }
            return std::isfinite(err) ? err / 10 : Unevaluated;
        };
        std::size_t calls = 0;
        auto const result = Run(cfg, set, fit, [&](GenerationStats const& s, Population const& pop, ParetoFront const& front) {
            CHECK(s.generation == calls++);
            CHECK(pop.size() == cfg.populationSize);
            CHECK(front.IsStrictlyDecreasing());
            for (auto const& ind : pop) {
                CHECK(!Validate(ind.trees[0], ops));
            }
        });
        CHECK(calls == cfg.generations + 1);
        for (std::size_t g = 1; g < result.history.size(); ++g) {
            CHECK(result.history[g].bestFitness <= result.history[g - 1].bestFitness);
        }
        CHECK(result.front.IsStrictlyDecreasing());
    }

    TEST_CASE("failing fitness maps to infinity and the run continues")
    {
        auto const ops = BuildOperatorSet({"+", "*"}, 1);
        std::vector<OperatorSet> const set{ops};
        GpConfig cfg = SmallConfig();
        FitnessFn const fit = [](Individual const& ind, EvalContext const&) -> double {
            if (Complexity(ind) % 2 == 0) {
                throw std::runtime_error("boom");
            }
            return static_cast<double>(Complexity(ind));
        };
        auto const result = Run(cfg, set, fit);
        CHECK(std::isfinite(result.best.fitness));
    }

    TEST_CASE("pareto front updates")
    {
        auto const ops = BuildOperatorSet({"+"}, 1);
        auto const x = T::Variable(ops, 0);
        auto sized = [&](int nodes, double f) {
            T t = x;
            for (int i = 1; i < nodes; i += 2) {
                t = T::Op(ops, "+", {t, x});
            }
            return WithFitness(Encode(t, ops), f);
        };

        ParetoFront front;
        CHECK(front.Update(sized(5, 2.0)));
        CHECK(front.Size() == 1);

        ParetoFront a;
        a.Update(sized(3, 1.0));
        CHECK(!a.Update(sized(7, 1.5)));
        CHECK(!a.Update(sized(7, 1.0)));
        CHECK(a.Size() == 1);

        ParetoFront b;
        b.Update(sized(7, 1.0));
        CHECK(b.Update(sized(3, 0.5)));
        CHECK(b.Size() == 1);
        CHECK(b.Entries().begin()->first == 3);

        ParetoFront c;
        CHECK(!c.Update(sized(3, Unevaluated)));
        c.Update(sized(3, 1.0));
        c.Update(sized(5, 0.8));
        c.Update(sized(9, 0.2));
        CHECK(c.Update(sized(7, 0.5)));
        CHECK(c.Size() == 4);
        CHECK(c.Update(sized(5, 0.1)));
        CHECK(c.Size() == 2);
        CHECK(c.IsStrictlyDecreasing());
    }

    TEST_CASE("pareto front property over random updates")
    {
        RngStream rng(30);
        auto const ops = BuildOperatorSet({"+"}, 1);
        ParetoFront front;
        for (int i = 0; i < 2000; ++i) {
            auto ind = WithFitness(GenerateTree(ops, 1 + static_cast<int>(rng.Index(4)), InitMethod::Grow, -1, 1, 32, rng),
                rng.Uniform(0.0, 10.0));
            front.Update(ind);
            REQUIRE(front.IsStrictlyDecreasing());
        }
    }

    TEST_CASE("rng streams are reproducible and independent")
    {
        RngStream a(42);
        RngStream b(42);
        for (int i = 0; i < 100; ++i) {
            CHECK(a() == b());
        }
        CHECK(RngStream(1).Split(3)() == RngStream(1).Split(3)());
        CHECK(RngStream(1).Split(3)() != RngStream(1).Split(4)());
        CHECK(RngStream(1).Split("init")() != RngStream(1).Split("reproduce")());
        CHECK(RngStream(1).Split(2, 5)() == RngStream(1).Split(2).Split(5)());
    }
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "treeforge/eval_engine.hpp"
#include "treeforge/evolution.hpp"
#include "treeforge/tree.hpp"

using namespace treeforge;
using T = RecursiveTree;

TEST_SUITE("eval_engine")
{
    TEST_CASE("fitness equals complexity")
    {
        auto const ops = BuildOperatorSet({"+", "*"}, 1);
        std::vector<OperatorSet> const set{ops};
        GpConfig cfg;
        cfg.populationSize = 200;
        auto pop = InitializePopulation(cfg, set, RngStream(1));
        BatchEvaluate(pop, [](Individual const& i, EvalContext const&) { return static_cast<double>(Complexity(i)); }, {}, 3);
        for (auto const& ind : pop) {
            CHECK(ind.fitness == static_cast<double>(Complexity(ind)));
        }
    }

    TEST_CASE("worker count does not change results")
    {
        auto const ops = testing::CatalogOperators(2);
        std::vector<OperatorSet> const set{ops};
        GpConfig cfg;
        auto pop = InitializePopulation(cfg, set, RngStream(2));
        Eigen::MatrixXd x(200, 2);
        RngStream rng(3);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            x.data()[i] = rng.Uniform(0.1, 3.0);
        }
        Eigen::VectorXd const y = x.col(0).array() * x.col(1).array();
        FitnessFn const fit = [&](Individual const& ind, EvalContext const&) { return EvaluateOnDataset(ind.trees[0], ops, x, y); };
        auto one = pop;
        auto many = pop;
        BatchEvaluate(one, fit, {}, 1);
        BatchEvaluate(many, fit, {}, 8);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            CHECK(std::bit_cast<std::uint64_t>(one[i].fitness) == std::bit_cast<std::uint64_t>(many[i].fitness));
        }
    }

    TEST_CASE("nan and exceptions become infinity")
    {
        auto const ops = BuildOperatorSet({"+"}, 1);
        Population pop(3);
        for (auto& ind : pop) {
            ind.trees.push_back(Encode(T::Variable(ops, 0), ops));
        }
        int n = 0;
        std::vector<int> order{0, 1, 2};
        FitnessFn const fit = [&](Individual const& ind, EvalContext const&) -> double {
            auto const idx = &ind - pop.data();
            if (idx == 0) {
                return std::nan("");
            }
            if (idx == 1) {
                throw std::runtime_error("bad");
            }
            ++n;
            return 2.0;
        };
        BatchEvaluate(pop, fit, {}, 1);
        CHECK(std::isinf(pop[0].fitness));
        CHECK(pop[0].fitness > 0);
        CHECK(std::isinf(pop[1].fitness));
        CHECK(pop[2].fitness == 2.0);
    }

    TEST_CASE("dataset mean absolute error")
    {
        auto const ops = BuildOperatorSet({"+", "*"}, 1);
        Eigen::MatrixXd x(3, 1);
        x << 1, 2, 3;
        Eigen::VectorXd y(3);
        y << 1, 2, 4;
        CHECK(EvaluateOnDataset(Encode(T::Variable(ops, 0), ops), ops, x, y) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

        Eigen::VectorXd const exact = x.col(0).array() * x.col(0).array() + 1.0;
        auto const law = Encode(T::Op(ops, "+", {T::Op(ops, "*", {T::Variable(ops, 0), T::Variable(ops, 0)}), T::Constant(1.0)}), ops);
        CHECK(EvaluateOnDataset(law, ops, x, exact) == 0.0);

        Eigen::VectorXd const flat = Eigen::VectorXd::Constant(3, 2.5);
        CHECK(EvaluateOnDataset(Encode(T::Constant(2.5), ops), ops, x, flat) == 0.0);

        auto const ops2 = BuildOperatorSet({"/"}, 1);
        Eigen::MatrixXd z(2, 1);
        z << 0, 1;
        auto const inv = Encode(T::Op(ops2, "/", {T::Constant(1.0), T::Variable(ops2, 0)}), ops2);
        CHECK(std::isinf(EvaluateOnDataset(inv, ops2, z, Eigen::VectorXd::Zero(2))));

        CHECK_THROWS(EvaluateOnDataset(law, ops, Eigen::MatrixXd::Zero(3, 2), y));
    }
}

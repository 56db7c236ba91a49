// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "treeforge/error.hpp"
#include "treeforge/experiment.hpp"
#include "treeforge/report.hpp"
#include "treeforge/tree.hpp"

using namespace treeforge;
namespace fs = std::filesystem;

namespace {

auto Slurp(fs::path const& p) -> std::string
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

auto Scratch(std::string const& name) -> fs::path
{
    auto const dir = fs::temp_directory_path() / ("treeforge_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

auto Names(OperatorSet const& ops) -> std::vector<std::string>
{
    std::vector<std::string> out;
    for (int i : ops.Operators()) {
        out.push_back(ops.Entry(i).name);
    }
    return out;
}

auto LineOf(std::string const& text) -> std::size_t
{
    try {
        (void)ConfigFromEntries(ParseConfigText(text));
    } catch (ConfigError const& e) {
        return e.Line();
    }
    return 0;
}

auto Run(std::string const& args) -> int
{
    int const status = std::system((std::string(TREEFORGE_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("defaults per experiment")
    {
        auto const bode = ConfigFromEntries(ParseConfigText("[experiment]\nname = bode\n"));
        CHECK(bode.gp.generations == 100);
        CHECK(bode.gp.populationSize == 1000);
        CHECK(bode.gp.CoBudget() == 25000);
        CHECK(bode.gp.coMethod == ConstOptMethod::GeneticAlgorithm);
        CHECK(Names(MakeProblem(bode, 0).ops[0]) == std::vector<std::string>{"+", "-", "*", "/", "pow"});

        auto const acro = DefaultExperimentConfig("acrobot");
        CHECK(acro.gp.generations == 50);
        CHECK(acro.gp.populationSize == 500);
        CHECK(acro.gp.CoBudget() == 0);
        auto const acroOps = Names(MakeProblem(acro, 0).ops[0]);
        CHECK(std::count(acroOps.begin(), acroOps.end(), "sin") == 1);
        CHECK(std::count(acroOps.begin(), acroOps.end(), "cos") == 1);

        auto const partial = DefaultExperimentConfig("lv_partial");
        CHECK(partial.gp.populationSize == 2000);
        CHECK(partial.gp.CoBudget() == 100000);
        CHECK(partial.gp.treesPerIndividual == 2);
        CHECK(Names(MakeProblem(partial, 0).ops[0]) == std::vector<std::string>{"+", "-", "*"});

        auto const loss = DefaultExperimentConfig("loss_small");
        CHECK(loss.gp.generations == 50);
        CHECK(loss.gp.populationSize == 250);
        CHECK(DefaultExperimentConfig("loss_big").gp.populationSize == 1000);
        CHECK(Names(MakeProblem(loss, 0).ops[0]) == std::vector<std::string>{"+", "-", "*", "/", "pow", "log", "exp"});
        CHECK(ExperimentNames().size() == 8);
    }

    TEST_CASE("unknown experiment lists the valid names")
    {
        try {
            (void)ConfigFromEntries(ParseConfigText("[experiment]\nname = venus\n"));
            FAIL("expected error");
        } catch (ConfigError const& e) {
            std::string const msg = e.what();
            CHECK(msg.find("venus") != std::string::npos);
            CHECK(msg.find("kepler") != std::string::npos);
            CHECK(msg.find("loss_big") != std::string::npos);
            CHECK(e.Line() == 2);
        }
    }

    TEST_CASE("config errors carry line numbers")
    {
        CHECK(LineOf("[experiment]\nname = bode\n[gp]\ncolour = red\n") == 4);
        CHECK(LineOf("[experiment]\nname = bode\n\n[gp]\ngenerations = many\n") == 5);
        CHECK(LineOf("[experiment]\nname = bode\nthis line is wrong\n") == 3);
        CHECK(LineOf("name = bode\n") == 1);
        CHECK(LineOf("[experiment\nname = bode\n") == 1);
        CHECK(LineOf("[experiment]\nname = bode\nseeds = 1\nseeds = 2\n") == 4);
        CHECK(LineOf("[experiment]\nname = bode\n[gp]\nco_method = simplex\n") == 4);
        CHECK_THROWS_AS(ConfigFromEntries(ParseConfigText("[gp]\ngenerations = 3\n")), ConfigError);
        CHECK_THROWS_AS(ConfigFromEntries(ParseConfigText("[experiment]\nname = bode\n[gp]\nelite_fraction = 1.5\n")), ConfigError);
        CHECK_THROWS(LoadConfig("/nonexistent/treeforge.ini"));
    }

    TEST_CASE("overrides and seed lists")
    {
        auto const cfg = ConfigFromEntries(ParseConfigText(
            "# comment\n[experiment]\nname = newton\nseeds = 0-2, 7\nworkers = 3\n; another\n[gp]\ngenerations = 12\n"
            "co_method = gradient\nweight_node_delete = 2.5\n[problem]\nnewton_noise = 0.1\n"));
        CHECK(cfg.seeds == std::vector<std::uint64_t>{0, 1, 2, 7});
        CHECK(cfg.workers == 3);
        CHECK(cfg.gp.generations == 12);
        CHECK(cfg.gp.coMethod == ConstOptMethod::Gradient);
        CHECK(cfg.gp.mutationWeights.nodeDelete == 2.5);
        CHECK(cfg.newtonNoise == 0.1);
        CHECK(SeedConfig(cfg, 7).seed == 7);
        CHECK(SeedConfig(cfg, 7).workers == 3);
    }

    TEST_CASE("pareto report")
    {
        ParetoFront front;
        std::vector<OperatorSet> const ops{BuildOperatorSet({"+"}, 1)};
        auto const empty = ReportPareto(front, ops);
        CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);
        Individual ind;
        ind.trees.push_back(Encode(BasicTree<double>::Variable(ops[0], 0), ops[0]));
        ind.fitness = 0.25;
        front.Update(ind);
        auto const one = ReportPareto(front, ops);
        CHECK(std::count(one.begin(), one.end(), '\n') == 2);
        CHECK(one.find("y1") != std::string::npos);
    }

    TEST_CASE("experiment output is reproducible and consistent")
    {
        auto const dir = Scratch("repro");
        auto cfg = DefaultExperimentConfig("bode");
        cfg.seeds = {42, 43};
        cfg.gp.generations = 6;
        cfg.gp.populationSize = 80;
        cfg.gp.coCandidates = 5;
        cfg.gp.coStepsPerCandidate = 5;
        cfg.gp.coGaPopulation = 4;
        cfg.outputDir = dir / "a";
        auto const first = RunExperiment(cfg);
        cfg.outputDir = dir / "b";
        cfg.workers = 4;
        (void)RunExperiment(cfg);
        for (auto const* name : {"bode_seed42_history.csv", "bode_seed42_pareto.csv", "bode_seed43_history.csv", "bode_seed43_pareto.csv"}) {
            auto const a = Slurp(dir / "a" / name);
            CHECK(!a.empty());
            CHECK(a == Slurp(dir / "b" / name));
        }
        CHECK(Slurp(dir / "a" / "bode_seed42_history.csv").rfind("generation,best_fitness,mean_fitness,best_complexity\n", 0) == 0);
        CHECK(Slurp(dir / "a" / "bode_seed42_pareto.csv").rfind("complexity,fitness,expression\n", 0) == 0);

        // recompute the summary from the last history row of each seed
        auto const summary = nlohmann::json::parse(Slurp(first.summaryPath));
        std::vector<double> fit;
        std::vector<double> size;
        for (auto const* name : {"bode_seed42_history.csv", "bode_seed43_history.csv"}) {
            std::istringstream in(Slurp(dir / "a" / name));
            std::string line;
            std::string last;
            while (std::getline(in, line)) {
                last = line;
            }
            std::vector<std::string> cells;
            std::stringstream row(last);
            for (std::string cell; std::getline(row, cell, ',');) {
                cells.push_back(cell);
            }
            REQUIRE(cells.size() == 4);
            fit.push_back(std::stod(cells[1]));
            size.push_back(std::stod(cells[3]));
        }
        double const fm = (fit[0] + fit[1]) / 2;
        double const sm = (size[0] + size[1]) / 2;
        CHECK(summary["experiment"] == "bode");
        CHECK(summary["seeds"] == nlohmann::json::array({42, 43}));
        CHECK(summary["fitness_mean"].get<double>() == fm);
        CHECK(summary["fitness_std"].get<double>() == std::sqrt(((fit[0] - fm) * (fit[0] - fm) + (fit[1] - fm) * (fit[1] - fm)) / 2));
        CHECK(summary["size_mean"].get<double>() == sm);
        CHECK(summary["size_std"].get<double>() == std::sqrt(((size[0] - sm) * (size[0] - sm) + (size[1] - sm) * (size[1] - sm)) / 2));
        CHECK(summary.contains("wall_time_s"));
        fs::remove_all(dir);
    }

    TEST_CASE("command line tool")
    {
        auto const dir = Scratch("tool");
        CHECK(Run("list-experiments") == 0);
        CHECK(Run("dump-dataset kepler") == 0);
        CHECK(Run("dump-dataset lv --seed 3") == 0);
        CHECK(Run("dump-dataset pluto") != 0);
        CHECK(Run("run --config " + (dir / "missing.ini").string()) != 0);
        {
            std::ofstream cfg(dir / "acro.ini");
            cfg << "[experiment]\nname = acrobot\nseeds = 1\n[gp]\ngenerations = 2\npopulation_size = 20\n";
        }
        CHECK(Run("run --quiet --trace --workers 2 --seed-offset 4 --out " + (dir / "out").string() + " --config " + (dir / "acro.ini").string()) == 0);
        CHECK(fs::exists(dir / "out" / "acrobot_seed5_history.csv"));
        CHECK(fs::exists(dir / "out" / "acrobot_summary.json"));
        auto const trace = Slurp(dir / "out" / "acrobot_seed5_trace.csv");
        CHECK(trace.rfind("step,theta1,theta2,omega1,omega2,torque\n", 0) == 0);
        {
            std::ofstream cfg(dir / "bad.ini");
            cfg << "[experiment]\nname = acrobot\nbogus = 1\n";
        }
        CHECK(Run("run --config " + (dir / "bad.ini").string()) != 0);
        fs::remove_all(dir);
    }

    TEST_CASE("worker override from the environment")
    {
        ::setenv("TREEFORGE_WORKERS", "6", 1);
        CHECK(ResolveWorkers(1) == 6);
        ::setenv("TREEFORGE_WORKERS", "zero", 1);
        CHECK_THROWS((void)ResolveWorkers(1));
        ::unsetenv("TREEFORGE_WORKERS");
        CHECK(ResolveWorkers(2) == 2);
    }
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "treeforge/datasets.hpp"
#include "treeforge/experiment.hpp"
#include "treeforge/lotka_volterra.hpp"
#include "treeforge/meta_loss.hpp"

namespace tf = treeforge;

namespace {

auto Csv(Eigen::MatrixXd const& columns, std::vector<std::string> const& header) -> std::string
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += (i == 0 ? "" : ",") + header[i];
    }
    out += '\n';
    char buffer[40];
    for (Eigen::Index r = 0; r < columns.rows(); ++r) {
        for (Eigen::Index c = 0; c < columns.cols(); ++c) {
            std::snprintf(buffer, sizeof buffer, "%.17g", columns(r, c));
            out += (c == 0 ? "" : ",");
            out += buffer;
        }
        out += '\n';
    }
    return out;
}

auto DatasetCsv(tf::Dataset const& d) -> std::string
{
    Eigen::MatrixXd all(d.Rows(), d.X.cols() + 1);
    all << d.X, d.Y;
    auto header = d.names;
    header.push_back(d.target);
    return Csv(all, header);
}

auto DumpDataset(std::string const& name, std::uint64_t seed) -> std::string
{
    auto const rng = tf::RngStream(seed).Split("data");
    if (name == "kepler") {
        return DatasetCsv(tf::GenKepler());
    }
    if (name == "bode") {
        return DatasetCsv(tf::GenBode());
    }
    if (name == "newton") {
        return DatasetCsv(tf::GenNewton(100, 0.05, rng));
    }
    if (name == "lv") {
        tf::LotkaVolterraProblem const lv(rng);
        auto const& traj = lv.Observed();
        Eigen::MatrixXd all(traj.times.size(), 5);
        all << Eigen::Map<Eigen::VectorXd const>(traj.times.data(), static_cast<Eigen::Index>(traj.times.size())),
            traj.states, lv.Derivatives();
        return Csv(all, {"t", "x", "y", "dx", "dy"});
    }
    if (name == "xor") {
        auto stream = tf::RngStream(seed).Split("xor");
        auto const batch = tf::GenXor(tf::LossTestPoints, stream);
        Eigen::MatrixXd all(batch.inputs.rows(), 3);
        all << batch.inputs, batch.labels;
        return Csv(all, {"x1", "x2", "label"});
    }
    throw tf::Error("unknown dataset '" + name + "' (valid: kepler, newton, bode, lv, xor)");
}

} // namespace

auto main(int argc, char** argv) -> int
{
    CLI::App app{"treeforge: genetic programming on node matrices"};
    app.require_subcommand(1);

    std::string configPath;
    std::uint64_t seedOffset = 0;
    std::size_t workers = 0;
    std::string outDir;
    bool trace = false;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", configPath, "config file")->required();
    run->add_option("--seed-offset", seedOffset, "added to every configured seed");
    run->add_option("--workers", workers, "evaluation threads");
    run->add_option("--out", outDir, "output directory");
    run->add_flag("--trace", trace, "write an acrobot rollout trace of each best policy");
    run->add_flag("--quiet", quiet, "no per-generation progress");

    auto* list = app.add_subcommand("list-experiments", "print the experiment names");

    std::string dataset;
    std::uint64_t dataSeed = 0;
    auto* dump = app.add_subcommand("dump-dataset", "print a dataset as CSV");
    dump->add_option("name", dataset, "kepler, newton, bode, lv or xor")->required();
    dump->add_option("--seed", dataSeed, "seed for generated datasets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (auto name : tf::ExperimentNames()) {
                std::cout << name << '\n';
            }
            return 0;
        }
        if (*dump) {
            std::cout << DumpDataset(dataset, dataSeed);
            return 0;
        }
        auto cfg = tf::LoadConfig(configPath);
        for (auto& s : cfg.seeds) {
            s += seedOffset;
        }
        cfg.workers = tf::ResolveWorkers(cfg.workers);
        if (workers > 0) {
            cfg.workers = workers;
        }
        if (!outDir.empty()) {
            cfg.outputDir = outDir;
        }
        cfg.writeTrace = cfg.writeTrace || trace;
        tf::ProgressFn progress;
        if (!quiet) {
            progress = [](std::uint64_t seed, tf::GenerationStats const& s) {
                std::fprintf(stderr, "seed %llu gen %zu best %.6g mean %.6g size %zu\n",
                    static_cast<unsigned long long>(seed), s.generation, s.bestFitness, s.meanFitness,
                    s.bestComplexity);
            };
        }
        auto const result = tf::RunExperiment(cfg, progress);
        bool allOk = true;
        for (auto const& s : result.seeds) {
            if (s.ok) {
                std::printf("seed %llu: fitness %.6g size %zu\n", static_cast<unsigned long long>(s.seed),
                    s.bestFitness, s.bestSize);
            } else {
                allOk = false;
                std::printf("seed %llu: failed: %s\n", static_cast<unsigned long long>(s.seed), s.error.c_str());
            }
        }
        std::printf("summary: %s\n", result.summaryPath.string().c_str());
        return allOk ? 0 : 1;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

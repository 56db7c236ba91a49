// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/meta_loss.hpp"

#include <algorithm>
#include <cmath>

#include "treeforge/adam.hpp"
#include "treeforge/error.hpp"
#include "treeforge/interpreter.hpp"

namespace treeforge {

namespace {

using Inputs = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using Activations = Eigen::Matrix<double, Eigen::Dynamic, MlpParams::Hidden>;

struct Forward {
    Activations h1;
    Activations h2;
    Eigen::VectorXd p;
};

auto Sigmoid(double z) -> double { return 1.0 / (1.0 + std::exp(-z)); }

auto RunForward(MlpParams const& params, Eigen::Ref<Inputs const> const& x) -> Forward
{
    Forward f;
    f.h1 = ((x * params.W1().transpose()).rowwise() + params.B1().transpose()).array().tanh();
    f.h2 = ((f.h1 * params.W2().transpose()).rowwise() + params.B2().transpose()).array().tanh();
    Eigen::VectorXd const z = (f.h2 * params.W3().transpose()).array() + params.B3();
    f.p = z.unaryExpr([](double v) { return Sigmoid(v); });
    return f;
}

void Uniform(Eigen::Ref<Eigen::VectorXd> out, double bound, RngStream& rng)
{
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] = rng.Uniform(-bound, bound);
    }
}

} // namespace

MlpParams::MlpParams(Eigen::VectorXd theta)
    : theta_(std::move(theta))
{
    if (theta_.size() != Size) {
        throw Error("mlp parameter vector has the wrong size");
    }
}

auto MlpParams::Random(RngStream& rng) -> MlpParams
{
    MlpParams p;
    auto& t = p.theta_;
    auto const in1 = static_cast<double>(Inputs);
    auto const in2 = static_cast<double>(Hidden);
    Uniform(t.segment(OffW1, Hidden * Inputs), std::sqrt(6.0 / in1), rng);
    Uniform(t.segment(OffB1, Hidden), 1.0 / std::sqrt(in1), rng);
    Uniform(t.segment(OffW2, Hidden * Hidden), std::sqrt(6.0 / in2), rng);
    Uniform(t.segment(OffB2, Hidden), 1.0 / std::sqrt(in2), rng);
    Uniform(t.segment(OffW3, Hidden), std::sqrt(6.0 / in2), rng);
    Uniform(t.segment(OffB3, 1), 1.0 / std::sqrt(in2), rng);
    return p;
}

auto GenXor(std::size_t n, RngStream& rng) -> XorBatch
{
    XorBatch batch;
    batch.inputs.resize(static_cast<Eigen::Index>(n), 2);
    batch.labels.resize(static_cast<Eigen::Index>(n));
    auto draw = [&rng]() {
        double v = rng.Uniform();
        while (v == 0.5) {
            v = rng.Uniform();
        }
        return v;
    };
    for (Eigen::Index i = 0; i < batch.inputs.rows(); ++i) {
        double const a = draw();
        double const b = draw();
        batch.inputs.row(i) << a, b;
        batch.labels[i] = XorLabel(a, b);
    }
    return batch;
}

auto MlpForward(MlpParams const& p, Eigen::Vector2d const& x) -> double
{
    Inputs row(1, 2);
    row.row(0) = x.transpose();
    return RunForward(p, row).p[0];
}

auto MlpForwardBatch(MlpParams const& p, Eigen::Ref<Inputs const> const& x) -> Eigen::VectorXd
{
    return RunForward(p, x).p;
}

auto MlpBackward(MlpParams const& params, Eigen::Ref<Inputs const> const& x, Eigen::Ref<Eigen::VectorXd const> const& lossGrad)
    -> Eigen::VectorXd
{
    auto const f = RunForward(params, x);
    Eigen::VectorXd grad(MlpParams::Size);
    Eigen::VectorXd const dz = lossGrad.array() * f.p.array() * (1.0 - f.p.array());

    using Layer1 = MlpParams::Layer1;
    using Layer2 = MlpParams::Layer2;
    using Layer3 = MlpParams::Layer3;
    Eigen::Map<Layer3>(grad.data() + MlpParams::OffW3) = dz.transpose() * f.h2;
    grad[MlpParams::OffB3] = dz.sum();

    Activations const dh2 = ((dz * params.W3()).array() * (1.0 - f.h2.array().square())).matrix();
    Eigen::Map<Layer2>(grad.data() + MlpParams::OffW2) = dh2.transpose() * f.h1;
    grad.segment(MlpParams::OffB2, MlpParams::Hidden) = dh2.colwise().sum().transpose();

    Activations const dh1 = ((dh2 * params.W2()).array() * (1.0 - f.h1.array().square())).matrix();
    Eigen::Map<Layer1>(grad.data() + MlpParams::OffW1) = dh1.transpose() * x;
    grad.segment(MlpParams::OffB1, MlpParams::Hidden) = dh1.colwise().sum().transpose();
    return grad;
}

auto Accuracy(MlpParams const& p, XorBatch const& batch) -> double
{
    Eigen::VectorXd const prob = MlpForwardBatch(p, batch.inputs);
    Eigen::Index correct = 0;
    for (Eigen::Index i = 0; i < prob.size(); ++i) {
        double const predicted = prob[i] > 0.5 ? 1.0 : 0.0;
        correct += predicted == batch.labels[i] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(prob.size());
}

auto TrainUnderLoss(NodeMatrixd const& lossTree, OperatorSet const& ops, TrainConfig const& cfg, MlpParams init,
    RngStream& rng) -> TrainResult
{
    constexpr double h = 1e-5;
    TrainResult result{std::move(init), false, 0};
    Adam adam(MlpParams::Size, AdamConfig{cfg.learningRate, 0.9, 0.999, 1e-8});
    auto const n = static_cast<Eigen::Index>(cfg.batchSize);
    Eigen::MatrixXd args(n, 2);
    Eigen::VectorXd step(n);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto const batch = GenXor(cfg.batchSize, rng);
        Eigen::VectorXd const p = MlpForwardBatch(result.params, batch.inputs);
        args.col(1) = batch.labels;
        args.col(0) = p;
        Eigen::ArrayXd const loss = EvaluateBatch(lossTree, ops, args);
        for (Eigen::Index i = 0; i < n; ++i) {
            step[i] = std::min({h, 0.5 * p[i], 0.5 * (1.0 - p[i])});
        }
        args.col(0) = p + step;
        Eigen::ArrayXd const up = EvaluateBatch(lossTree, ops, args);
        args.col(0) = p - step;
        Eigen::ArrayXd const down = EvaluateBatch(lossTree, ops, args);

        Eigen::VectorXd dLdp(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            // a saturated output (p exactly 0 or 1) has zero sigmoid slope
            dLdp[i] = step[i] > 1e-12 ? (up[i] - down[i]) / (2.0 * step[i]) / static_cast<double>(n) : 0.0;
        }
        if (!loss.allFinite() || !dLdp.allFinite()) {
            result.diverged = true;
            return result;
        }
        Eigen::VectorXd const grad = MlpBackward(result.params, batch.inputs, dLdp);
        if (!grad.allFinite()) {
            result.diverged = true;
            return result;
        }
        adam.Step(result.params.Theta(), grad);
        result.epochsRun = epoch + 1;
    }
    return result;
}

auto TrainUnderLoss(NodeMatrixd const& lossTree, OperatorSet const& ops, TrainConfig const& cfg, RngStream& rng)
    -> TrainResult
{
    auto init = MlpParams::Random(rng);
    return TrainUnderLoss(lossTree, ops, cfg, std::move(init), rng);
}

auto LossOperators() -> OperatorSet
{
    return BuildOperatorSet({"+", "-", "*", "/", "pow", "log", "exp"}, 2, {"p", "y"});
}

auto LossFnFitness(Individual const& ind, OperatorSet const& ops, LossScale scale, EvalContext const& ctx) -> double
{
    std::size_t const nets = scale == LossScale::Small ? 1 : 4;
    TrainConfig const cfg = scale == LossScale::Small ? TrainConfig{100, 50, 0.01} : TrainConfig{500, 100, 0.01};
    auto const base = RngStream(ctx.seed).Split("loss").Split(ctx.generation, Fingerprint(ind));
    double accuracy = 0.0;
    for (std::size_t net = 0; net < nets; ++net) {
        auto train = base.Split(net).Split("train");
        auto test = base.Split(net).Split("test");
        auto const trained = TrainUnderLoss(ind.trees.front(), ops, cfg, train);
        if (trained.diverged) {
            return 0.0;
        }
        accuracy += Accuracy(trained.params, GenXor(LossTestPoints, test));
    }
    return -accuracy / static_cast<double>(nets);
}

} // namespace treeforge

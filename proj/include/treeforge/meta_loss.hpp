// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>

#include "treeforge/eval_engine.hpp"
#include "treeforge/individual.hpp"
#include "treeforge/operator_set.hpp"
#include "treeforge/rng.hpp"

namespace treeforge {

/// 2 -> 16 -> 16 -> 1 perceptron, tanh hidden layers, sigmoid output.
/// Parameters live in one flat vector so a single Adam instance trains them;
/// the accessors are views into it.
class MlpParams {
public:
    static constexpr Eigen::Index Inputs = 2;
    static constexpr Eigen::Index Hidden = 16;
    static constexpr Eigen::Index Size = Hidden * Inputs + Hidden + Hidden * Hidden + Hidden + Hidden + 1;

    using Layer1 = Eigen::Matrix<double, Hidden, Inputs>;
    using Layer2 = Eigen::Matrix<double, Hidden, Hidden>;
    using Layer3 = Eigen::Matrix<double, 1, Hidden>;
    using Bias = Eigen::Matrix<double, Hidden, 1>;

    MlpParams()
        : theta_(Eigen::VectorXd::Zero(Size))
    {
    }

    explicit MlpParams(Eigen::VectorXd theta);

    /// Weights uniform in +-sqrt(6 / fan_in), biases uniform in +-1/sqrt(fan_in).
    static auto Random(RngStream& rng) -> MlpParams;

    [[nodiscard]] auto W1() const { return Eigen::Map<Layer1 const>(theta_.data() + OffW1); }
    [[nodiscard]] auto B1() const { return Eigen::Map<Bias const>(theta_.data() + OffB1); }
    [[nodiscard]] auto W2() const { return Eigen::Map<Layer2 const>(theta_.data() + OffW2); }
    [[nodiscard]] auto B2() const { return Eigen::Map<Bias const>(theta_.data() + OffB2); }
    [[nodiscard]] auto W3() const { return Eigen::Map<Layer3 const>(theta_.data() + OffW3); }
    [[nodiscard]] auto B3() const -> double { return theta_[OffB3]; }

    [[nodiscard]] auto Theta() const noexcept -> Eigen::VectorXd const& { return theta_; }
    [[nodiscard]] auto Theta() noexcept -> Eigen::VectorXd& { return theta_; }

    static constexpr Eigen::Index OffW1 = 0;
    static constexpr Eigen::Index OffB1 = OffW1 + Hidden * Inputs;
    static constexpr Eigen::Index OffW2 = OffB1 + Hidden;
    static constexpr Eigen::Index OffB2 = OffW2 + Hidden * Hidden;
    static constexpr Eigen::Index OffW3 = OffB2 + Hidden;
    static constexpr Eigen::Index OffB3 = OffW3 + Hidden;

private:
    Eigen::VectorXd theta_;
};

struct XorBatch {
    Eigen::Matrix<double, Eigen::Dynamic, 2> inputs;
    Eigen::VectorXd labels;
};

/// 0 when both coordinates are on the same side of 0.5, else 1.
[[nodiscard]] constexpr auto XorLabel(double a, double b) -> double { return (a < 0.5) == (b < 0.5) ? 0.0 : 1.0; }

/// Uniform points on the unit square; coordinates equal to 0.5 are redrawn.
auto GenXor(std::size_t n, RngStream& rng) -> XorBatch;

[[nodiscard]] auto MlpForward(MlpParams const& p, Eigen::Vector2d const& x) -> double;

[[nodiscard]] auto MlpForwardBatch(MlpParams const& p, Eigen::Ref<Eigen::Matrix<double, Eigen::Dynamic, 2> const> const& x)
    -> Eigen::VectorXd;

/// Gradient w.r.t. all parameters of sum_i lossGrad[i] * p_i, i.e. chain rule
/// given dLoss/dp per sample.
[[nodiscard]] auto MlpBackward(MlpParams const& p, Eigen::Ref<Eigen::Matrix<double, Eigen::Dynamic, 2> const> const& x,
    Eigen::Ref<Eigen::VectorXd const> const& lossGrad) -> Eigen::VectorXd;

/// Fraction of points whose thresholded output (0.5) matches the label.
[[nodiscard]] auto Accuracy(MlpParams const& p, XorBatch const& batch) -> double;

struct TrainConfig {
    std::size_t epochs{100};
    std::size_t batchSize{50};
    double learningRate{0.01};
};

struct TrainResult {
    MlpParams params;
    bool diverged{false};
    std::size_t epochsRun{0};
};

/// Trains under the per-sample loss tree L(p, y): one fresh batch and one
/// Adam step per epoch on the batch-mean loss. dL/dp comes from central
/// differences through the tree (h = 1e-5), the rest is analytic backprop.
auto TrainUnderLoss(NodeMatrixd const& lossTree, OperatorSet const& ops, TrainConfig const& cfg, MlpParams init,
    RngStream& rng) -> TrainResult;

auto TrainUnderLoss(NodeMatrixd const& lossTree, OperatorSet const& ops, TrainConfig const& cfg, RngStream& rng)
    -> TrainResult;

enum class LossScale : std::uint8_t { Small, Big };

/// Operators {+, -, *, /, pow, log, exp} over (p, y).
[[nodiscard]] auto LossOperators() -> OperatorSet;

inline constexpr std::size_t LossTestPoints = 500;

/// Negative mean test accuracy; small trains 1 net (100 epochs x 50 points),
/// big 4 nets (500 x 100). Any diverged training gives 0. Initialisation and
/// data come from (ctx.seed, ctx.generation, net) so every candidate of a
/// generation sees the same networks and batches.
auto LossFnFitness(Individual const& ind, OperatorSet const& ops, LossScale scale, EvalContext const& ctx) -> double;

} // namespace treeforge

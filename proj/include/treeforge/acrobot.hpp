// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "treeforge/eval_engine.hpp"
#include "treeforge/individual.hpp"
#include "treeforge/operator_set.hpp"

namespace treeforge {

/// Two-link acrobot with Sutton's parameters (unit masses and lengths,
/// centre of mass at 0.5, unit inertia, g = 9.8); torque acts on the elbow.
struct AcrobotState {
    double theta1{0.0};
    double theta2{0.0};
    double omega1{0.0};
    double omega2{0.0};

    [[nodiscard]] auto AsVector() const -> Eigen::Vector4d { return {theta1, theta2, omega1, omega2}; }
    static auto FromVector(Eigen::Vector4d const& v) -> AcrobotState { return {v[0], v[1], v[2], v[3]}; }
};

namespace acrobot {

inline constexpr double Dt = 0.2;
inline constexpr double Horizon = 200.0;
inline constexpr std::size_t Steps = 1000;
inline constexpr double MaxOmega1 = 4.0 * std::numbers::pi;
inline constexpr double MaxOmega2 = 9.0 * std::numbers::pi;
inline constexpr double SuccessHeight = 1.0;
inline constexpr std::size_t Rollouts = 4;

} // namespace acrobot

/// [cos th1, sin th1, cos th2, sin th2, w1, w2]
[[nodiscard]] auto AcrobotObserve(AcrobotState const& s) -> Eigen::Matrix<double, 6, 1>;

/// Time derivative of (th1, th2, w1, w2) under the given elbow torque.
[[nodiscard]] auto AcrobotDerivative(Eigen::Vector4d const& s, double torque) -> Eigen::Vector4d;

/// One RK4 step over dt followed by angle wrapping to [-pi, pi] and velocity
/// clipping.
[[nodiscard]] auto AcrobotStep(AcrobotState const& s, int torque, double dt = acrobot::Dt) -> AcrobotState;

/// Kinetic plus potential energy (zero potential at the pivot).
[[nodiscard]] auto AcrobotEnergy(AcrobotState const& s) -> double;

/// -cos th1 - cos(th1 + th2) > 1.
[[nodiscard]] auto SwingUpReached(AcrobotState const& s) -> bool;

/// Sign of the policy output; 0 maps to +1.
[[nodiscard]] constexpr auto PolicyToTorque(double output) -> int { return output >= 0.0 ? 1 : -1; }

[[nodiscard]] auto AcrobotOperators() -> OperatorSet;

struct AcrobotTraceRow {
    std::size_t step;
    AcrobotState state;
    int torque;
};

struct RolloutResult {
    std::optional<std::size_t> successStep;  // 1-based step at which swing-up first held
    bool nonFinite{false};
    std::vector<AcrobotTraceRow> trace;

    /// First success time over the horizon, 1 if never reached.
    [[nodiscard]] auto Score() const -> double;
};

auto AcrobotRollout(NodeMatrixd const& policy, OperatorSet const& ops, AcrobotState start, bool recordTrace = false)
    -> RolloutResult;

/// Near-rest starts (each component uniform in [-0.1, 0.1]) derived from the
/// evaluation seed and generation, shared by the whole population.
auto AcrobotStarts(EvalContext const& ctx) -> std::array<AcrobotState, acrobot::Rollouts>;

/// Mean rollout score over the shared starts; 1 if the policy ever outputs a
/// non-finite value.
auto AcrobotFitness(Individual const& ind, OperatorSet const& ops, EvalContext const& ctx) -> double;

} // namespace treeforge

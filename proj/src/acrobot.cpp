// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/acrobot.hpp"

#include <algorithm>
#include <cmath>

#include "treeforge/interpreter.hpp"
#include "treeforge/ode.hpp"
#include "treeforge/rng.hpp"

namespace treeforge {

namespace {

constexpr double LinkMass1 = 1.0;
constexpr double LinkMass2 = 1.0;
constexpr double LinkLength1 = 1.0;
constexpr double LinkCom1 = 0.5;
constexpr double LinkCom2 = 0.5;
constexpr double LinkInertia1 = 1.0;
constexpr double LinkInertia2 = 1.0;
constexpr double Gravity = 9.8;

auto Wrap(double angle) -> double
{
    constexpr double pi = std::numbers::pi;
    double wrapped = std::fmod(angle + pi, 2.0 * pi);
    if (wrapped < 0.0) {
        wrapped += 2.0 * pi;
    }
    return wrapped - pi;
}

} // namespace

auto AcrobotObserve(AcrobotState const& s) -> Eigen::Matrix<double, 6, 1>
{
    Eigen::Matrix<double, 6, 1> obs;
    obs << std::cos(s.theta1), std::sin(s.theta1), std::cos(s.theta2), std::sin(s.theta2), s.omega1, s.omega2;
    return obs;
}

auto AcrobotDerivative(Eigen::Vector4d const& s, double torque) -> Eigen::Vector4d
{
    constexpr double m1 = LinkMass1;
    constexpr double m2 = LinkMass2;
    constexpr double l1 = LinkLength1;
    constexpr double lc1 = LinkCom1;
    constexpr double lc2 = LinkCom2;
    constexpr double i1 = LinkInertia1;
    constexpr double i2 = LinkInertia2;
    constexpr double g = Gravity;
    constexpr double halfPi = std::numbers::pi / 2.0;

    double const th1 = s[0];
    double const th2 = s[1];
    double const w1 = s[2];
    double const w2 = s[3];
    double const d1 = m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * std::cos(th2)) + i1 + i2;
    double const d2 = m2 * (lc2 * lc2 + l1 * lc2 * std::cos(th2)) + i2;
    double const phi2 = m2 * lc2 * g * std::cos(th1 + th2 - halfPi);
    double const phi1 = -m2 * l1 * lc2 * w2 * w2 * std::sin(th2) - 2.0 * m2 * l1 * lc2 * w2 * w1 * std::sin(th2)
        + (m1 * lc1 + m2 * l1) * g * std::cos(th1 - halfPi) + phi2;
    double const dw2 = (torque + d2 / d1 * phi1 - m2 * l1 * lc2 * w1 * w1 * std::sin(th2) - phi2)
        / (m2 * lc2 * lc2 + i2 - d2 * d2 / d1);
    double const dw1 = -(d2 * dw2 + phi1) / d1;
    return {w1, w2, dw1, dw2};
}

auto AcrobotStep(AcrobotState const& s, int torque, double dt) -> AcrobotState
{
    auto const a = static_cast<double>(torque);
    auto rhs = [a](double /*t*/, Eigen::Vector4d const& x) { return AcrobotDerivative(x, a); };
    Eigen::Vector4d const next = Rk4Step(rhs, 0.0, s.AsVector(), dt);
    return {Wrap(next[0]), Wrap(next[1]), std::clamp(next[2], -acrobot::MaxOmega1, acrobot::MaxOmega1),
        std::clamp(next[3], -acrobot::MaxOmega2, acrobot::MaxOmega2)};
}

auto AcrobotEnergy(AcrobotState const& s) -> double
{
    constexpr double m1 = LinkMass1;
    constexpr double m2 = LinkMass2;
    constexpr double l1 = LinkLength1;
    constexpr double lc1 = LinkCom1;
    constexpr double lc2 = LinkCom2;
    double const c2 = std::cos(s.theta2);
    double const d1 = m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * c2) + LinkInertia1 + LinkInertia2;
    double const d2 = m2 * (lc2 * lc2 + l1 * lc2 * c2) + LinkInertia2;
    double const d3 = m2 * lc2 * lc2 + LinkInertia2;
    double const kinetic = 0.5 * (d1 * s.omega1 * s.omega1 + 2.0 * d2 * s.omega1 * s.omega2 + d3 * s.omega2 * s.omega2);
    double const potential = -Gravity
        * ((m1 * lc1 + m2 * l1) * std::cos(s.theta1) + m2 * lc2 * std::cos(s.theta1 + s.theta2));
    return kinetic + potential;
}

auto SwingUpReached(AcrobotState const& s) -> bool
{
    return -std::cos(s.theta1) - std::cos(s.theta1 + s.theta2) > acrobot::SuccessHeight;
}

auto AcrobotOperators() -> OperatorSet
{
    return BuildOperatorSet({"+", "-", "*", "/", "pow", "sin", "cos"}, 6, {"c1", "s1", "c2", "s2", "w1", "w2"});
}

auto RolloutResult::Score() const -> double
{
    if (nonFinite || !successStep) {
        return 1.0;
    }
    return static_cast<double>(*successStep) * acrobot::Dt / acrobot::Horizon;
}

auto AcrobotRollout(NodeMatrixd const& policy, OperatorSet const& ops, AcrobotState start, bool recordTrace)
    -> RolloutResult
{
    RolloutResult result;
    auto state = start;
    for (std::size_t step = 1; step <= acrobot::Steps; ++step) {
        auto const obs = AcrobotObserve(state);
        double const output = Evaluate(policy, ops, obs);
        if (!std::isfinite(output)) {
            result.nonFinite = true;
            return result;
        }
        int const torque = PolicyToTorque(output);
        state = AcrobotStep(state, torque);
        if (recordTrace) {
            result.trace.push_back({step, state, torque});
        }
        if (SwingUpReached(state)) {
            result.successStep = step;
            return result;
        }
    }
    return result;
}

auto AcrobotStarts(EvalContext const& ctx) -> std::array<AcrobotState, acrobot::Rollouts>
{
    auto rng = RngStream(ctx.seed).Split("acrobot").Split(ctx.generation);
    std::array<AcrobotState, acrobot::Rollouts> starts{};
    for (auto& s : starts) {
        s = {rng.Uniform(-0.1, 0.1), rng.Uniform(-0.1, 0.1), rng.Uniform(-0.1, 0.1), rng.Uniform(-0.1, 0.1)};
    }
    return starts;
}

auto AcrobotFitness(Individual const& ind, OperatorSet const& ops, EvalContext const& ctx) -> double
{
    double total = 0.0;
    for (auto const& start : AcrobotStarts(ctx)) {
        auto const rollout = AcrobotRollout(ind.trees.front(), ops, start);
        if (rollout.nonFinite) {
            return 1.0;
        }
        total += rollout.Score();
    }
    return total / static_cast<double>(acrobot::Rollouts);
}

} // namespace treeforge

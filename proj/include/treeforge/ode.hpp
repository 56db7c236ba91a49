// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <vector>

#include "treeforge/error.hpp"

namespace treeforge {

template <typename Scalar, int Dim = Eigen::Dynamic>
struct OdeSystem {
    using State = Eigen::Matrix<Scalar, Dim, 1>;
    Eigen::Index dimension{Dim == Eigen::Dynamic ? 0 : Dim};
    std::function<State(Scalar, State const&)> rhs;

    auto operator()(Scalar t, State const& x) const -> State { return rhs(t, x); }
};

/// Sampled solution; states holds one row per time point.
template <typename Scalar>
struct Trajectory {
    std::vector<Scalar> times;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> states;
    bool divergent{false};

    [[nodiscard]] auto Points() const noexcept -> Eigen::Index { return states.rows(); }
};

/// One classic fourth-order Runge-Kutta step.
template <typename Rhs, typename Scalar, int Dim>
[[nodiscard]] auto Rk4Step(Rhs const& rhs, Scalar t, Eigen::Matrix<Scalar, Dim, 1> const& x, Scalar dt)
    -> Eigen::Matrix<Scalar, Dim, 1>
{
    using State = Eigen::Matrix<Scalar, Dim, 1>;
    Scalar const half = dt / Scalar{2};
    State const k1 = rhs(t, x);
    State const k2 = rhs(t + half, State(x + half * k1));
    State const k3 = rhs(t + half, State(x + half * k2));
    State const k4 = rhs(t + dt, State(x + dt * k3));
    return x + (dt / Scalar{6}) * (k1 + Scalar{2} * k2 + Scalar{2} * k3 + k4);
}

/// Fixed-step RK4 from t0 to t1, endpoints included; the last step is
/// shortened to land on t1. Stops at the first non-finite state and flags the
/// trajectory divergent (the returned points are all finite).
template <typename Rhs, typename Scalar, int Dim>
[[nodiscard]] auto Rk4Integrate(Rhs const& rhs, Eigen::Matrix<Scalar, Dim, 1> const& x0, Scalar t0, Scalar t1, Scalar dt)
    -> Trajectory<Scalar>
{
    using std::ceil;
    if (!(dt > Scalar{0}) || !(t1 > t0)) {
        throw Error("rk4 needs dt > 0 and t1 > t0");
    }
    auto const steps = static_cast<Eigen::Index>(ceil((t1 - t0) / dt - Scalar{1e-9}));
    Trajectory<Scalar> traj;
    traj.states.resize(steps + 1, x0.size());
    traj.times.reserve(static_cast<std::size_t>(steps + 1));
    traj.states.row(0) = x0.transpose();
    traj.times.push_back(t0);
    Eigen::Matrix<Scalar, Dim, 1> x = x0;
    for (Eigen::Index i = 1; i <= steps; ++i) {
        Scalar const t = traj.times.back();
        Scalar const next = i == steps ? t1 : t0 + static_cast<Scalar>(i) * dt;
        x = Rk4Step(rhs, t, x, next - t);
        if (!x.allFinite()) {
            traj.divergent = true;
            traj.states.conservativeResize(i, Eigen::NoChange);
            return traj;
        }
        traj.states.row(i) = x.transpose();
        traj.times.push_back(next);
    }
    return traj;
}

/// Per-point time derivatives: central differences inside, second-order
/// one-sided stencils at both ends. Requires >= 3 uniformly spaced points.
template <typename Scalar>
[[nodiscard]] auto FiniteDifferenceTargets(Trajectory<Scalar> const& traj)
    -> Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
{
    using std::abs;
    using std::max;
    auto const n = traj.Points();
    if (n < 3 || static_cast<Eigen::Index>(traj.times.size()) != n) {
        throw Error("finite differences need at least 3 points");
    }
    Scalar const dt = traj.times[1] - traj.times[0];
    for (Eigen::Index i = 1; i < n; ++i) {
        auto const step = traj.times[static_cast<std::size_t>(i)] - traj.times[static_cast<std::size_t>(i - 1)];
        if (abs(step - dt) > Scalar{1e-9} * max(Scalar{1}, abs(dt))) {
            throw Error("finite differences need uniformly spaced points");
        }
    }
    auto const& x = traj.states;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d(n, x.cols());
    Scalar const twoDt = Scalar{2} * dt;
    d.row(0) = (Scalar{-3} * x.row(0) + Scalar{4} * x.row(1) - x.row(2)) / twoDt;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        d.row(i) = (x.row(i + 1) - x.row(i - 1)) / twoDt;
    }
    d.row(n - 1) = (Scalar{3} * x.row(n - 1) - Scalar{4} * x.row(n - 2) + x.row(n - 3)) / twoDt;
    return d;
}

} // namespace treeforge

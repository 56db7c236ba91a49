// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

#include "treeforge/rng.hpp"

namespace treeforge {

struct Dataset {
    Eigen::MatrixXd X;
    Eigen::VectorXd Y;
    std::vector<std::string> names;
    std::vector<std::string> units;
    std::string target;
    std::string targetUnit;

    [[nodiscard]] auto Rows() const noexcept -> Eigen::Index { return X.rows(); }
};

/// Planets Mercury..Neptune: semi-major axis a [AU] -> sidereal period T [yr]
/// (mean orbital elements, J2000).
auto GenKepler() -> Dataset;

/// Inputs m1, m2 ~ U[1, 10], r ~ U[1, 5]; target m1 m2 / r^2 plus Gaussian
/// noise (G = 1).
auto GenNewton(std::size_t n, double noiseSigma, RngStream rng) -> Dataset;

/// Titius-Bode table Mercury..Uranus including Ceres: planet index n ->
/// observed mean distance [AU]. Mercury's index (-inf in the law) is stored
/// as BodeMercuryIndex so the data stay finite.
auto GenBode() -> Dataset;

inline constexpr double BodeMercuryIndex = -10.0;

} // namespace treeforge

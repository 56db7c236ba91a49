// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/datasets.hpp"

#include <array>

#include "treeforge/error.hpp"

namespace treeforge {

auto GenKepler() -> Dataset
{
    // semi-major axis [AU] and period [Julian years] from mean elements
    constexpr std::array<double, 8> axis{0.38710, 0.72334, 1.0, 1.52371, 5.20289, 9.53668, 19.18916, 30.06992};
    constexpr std::array<double, 8> period{0.24085, 0.61520, 1.0, 1.88085, 11.86261, 29.44801, 84.01753, 164.79031};
    Dataset d;
    d.X.resize(axis.size(), 1);
    d.Y.resize(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i) {
        d.X(static_cast<Eigen::Index>(i), 0) = axis[i];
        d.Y[static_cast<Eigen::Index>(i)] = period[i];
    }
    d.names = {"a"};
    d.units = {"AU"};
    d.target = "T";
    d.targetUnit = "yr";
    return d;
}

auto GenNewton(std::size_t n, double noiseSigma, RngStream rng) -> Dataset
{
    if (n == 0) {
        throw Error("newton dataset needs at least one point");
    }
    Dataset d;
    d.X.resize(static_cast<Eigen::Index>(n), 3);
    d.Y.resize(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
        double const m1 = rng.Uniform(1.0, 10.0);
        double const m2 = rng.Uniform(1.0, 10.0);
        double const r = rng.Uniform(1.0, 5.0);
        double const noise = noiseSigma > 0.0 ? rng.Normal(0.0, noiseSigma) : 0.0;
        d.X.row(i) << m1, m2, r;
        d.Y[i] = m1 * m2 / (r * r) + noise;
    }
    d.names = {"m1", "m2", "r"};
    d.units = {"", "", ""};
    d.target = "F";
    d.targetUnit = "";
    return d;
}

auto GenBode() -> Dataset
{
    constexpr std::array<double, 8> index{BodeMercuryIndex, 0, 1, 2, 3, 4, 5, 6};
    // Mercury, Venus, Earth, Mars, Ceres, Jupiter, Saturn, Uranus
    constexpr std::array<double, 8> distance{0.39, 0.72, 1.00, 1.52, 2.77, 5.20, 9.54, 19.2};
    Dataset d;
    d.X.resize(index.size(), 1);
    d.Y.resize(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        d.X(static_cast<Eigen::Index>(i), 0) = index[i];
        d.Y[static_cast<Eigen::Index>(i)] = distance[i];
    }
    d.names = {"n"};
    d.units = {""};
    d.target = "d";
    d.targetUnit = "AU";
    return d;
}

} // namespace treeforge

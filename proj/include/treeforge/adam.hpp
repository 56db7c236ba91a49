// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>

namespace treeforge {

struct AdamConfig {
    double learningRate{0.05};
    double beta1{0.9};
    double beta2{0.999};
    double epsilon{1e-8};
};

/// Bias-corrected Adam on a flat parameter vector.
class Adam {
public:
    Adam(Eigen::Index size, AdamConfig cfg = {})
        : cfg_(cfg)
        , m_(Eigen::VectorXd::Zero(size))
        , v_(Eigen::VectorXd::Zero(size))
    {
    }

    void Step(Eigen::Ref<Eigen::VectorXd> params, Eigen::Ref<Eigen::VectorXd const> const& grad)
    {
        ++t_;
        m_ = cfg_.beta1 * m_ + (1.0 - cfg_.beta1) * grad;
        v_ = cfg_.beta2 * v_ + (1.0 - cfg_.beta2) * grad.cwiseAbs2();
        double const c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        double const c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        params.array() -= cfg_.learningRate * (m_.array() / c1) / ((v_.array() / c2).sqrt() + cfg_.epsilon);
    }

    [[nodiscard]] auto StepCount() const noexcept -> std::size_t { return t_; }
    [[nodiscard]] auto FirstMoment() const noexcept -> Eigen::VectorXd const& { return m_; }
    [[nodiscard]] auto SecondMoment() const noexcept -> Eigen::VectorXd const& { return v_; }
    [[nodiscard]] auto Config() const noexcept -> AdamConfig const& { return cfg_; }

private:
    AdamConfig cfg_;
    Eigen::VectorXd m_;
    Eigen::VectorXd v_;
    std::size_t t_{0};
};

} // namespace treeforge

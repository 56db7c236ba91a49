// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <span>
#include <string>

#include "treeforge/operator_set.hpp"
#include "treeforge/pareto_front.hpp"

namespace treeforge {

/// Fixed-width table, one row per complexity in increasing order.
[[nodiscard]] auto ReportPareto(ParetoFront const& front, std::span<OperatorSet const> ops) -> std::string;

} // namespace treeforge

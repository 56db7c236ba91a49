// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/report.hpp"

#include <cstdio>
#include <string>

namespace treeforge {

auto ReportPareto(ParetoFront const& front, std::span<OperatorSet const> ops) -> std::string
{
    std::string out = "complexity       fitness  expression\n";
    char buffer[64];
    for (auto const& [complexity, entry] : front.Entries()) {
        std::snprintf(buffer, sizeof buffer, "%10zu  %12.6g  ", complexity, entry.fitness);
        out += buffer;
        out += ToInfix(entry.individual, ops);
        out += '\n';
    }
    return out;
}

} // namespace treeforge

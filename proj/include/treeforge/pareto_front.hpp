// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>

#include "treeforge/individual.hpp"

namespace treeforge {

/// Best fitness found at each complexity level. An entry survives only while
/// it is strictly fitter than every simpler entry, so fitness strictly
/// decreases as complexity grows.
class ParetoFront {
public:
    struct Entry {
        double fitness;
        Individual individual;
    };

    /// Returns true when the individual entered the front.
    auto Update(Individual const& ind) -> bool
    {
        if (!std::isfinite(ind.fitness)) {
            return false;
        }
        auto const c = Complexity(ind);
        // must beat everything at complexity <= c
        for (auto it = entries_.begin(); it != entries_.end() && it->first <= c; ++it) {
            if (it->second.fitness <= ind.fitness) {
                return false;
            }
        }
        entries_.insert_or_assign(c, Entry{ind.fitness, ind});
        for (auto it = entries_.upper_bound(c); it != entries_.end();) {
            it = it->second.fitness >= ind.fitness ? entries_.erase(it) : std::next(it);
        }
        return true;
    }

    [[nodiscard]] auto Entries() const noexcept -> std::map<std::size_t, Entry> const& { return entries_; }
    [[nodiscard]] auto Size() const noexcept -> std::size_t { return entries_.size(); }
    [[nodiscard]] auto Empty() const noexcept -> bool { return entries_.empty(); }

    [[nodiscard]] auto IsStrictlyDecreasing() const -> bool
    {
        double previous = std::numeric_limits<double>::infinity();
        for (auto const& [c, e] : entries_) {
            if (!(e.fitness < previous)) {
                return false;
            }
            previous = e.fitness;
        }
        return true;
    }

private:
    std::map<std::size_t, Entry> entries_;
};

} // namespace treeforge

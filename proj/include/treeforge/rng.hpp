// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace treeforge {

/// Counter-based random stream. Draws are splitmix64 hashes of (key, counter),
/// and Split derives an independent child stream from (key, id) without
/// touching the parent counter, so a tree of streams is reproducible no
/// matter in which order or on which thread its branches are consumed.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed = 0) noexcept
        : key_(Mix(seed ^ 0x6a09e667f3bcc909ULL))
    {
    }

    static constexpr auto min() noexcept -> result_type { return 0; }
    static constexpr auto max() noexcept -> result_type { return std::numeric_limits<result_type>::max(); }

    auto operator()() noexcept -> result_type { return Mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    [[nodiscard]] auto Split(std::uint64_t id) const noexcept -> RngStream
    {
        RngStream child;
        child.key_ = Mix(key_ ^ Mix(id + 0xbb67ae8584caa73bULL));
        return child;
    }

    [[nodiscard]] auto Split(std::string_view label) const noexcept -> RngStream
    {
        // FNV-1a
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : label) {
            h = (h ^ c) * 0x100000001b3ULL;
        }
        return Split(h);
    }

    template <typename... Ids>
    [[nodiscard]] auto Split(std::uint64_t first, Ids... rest) const noexcept -> RngStream
    {
        return Split(first).Split(static_cast<std::uint64_t>(rest)...);
    }

    auto Uniform(double low = 0.0, double high = 1.0) -> double
    {
        return std::uniform_real_distribution<double>(low, high)(*this);
    }

    auto Normal(double mean = 0.0, double stddev = 1.0) -> double
    {
        return std::normal_distribution<double>(mean, stddev)(*this);
    }

    /// Uniform integer in [0, n).
    auto Index(std::size_t n) -> std::size_t
    {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(*this);
    }

    auto Bernoulli(double p) -> bool { return Uniform() < p; }

    [[nodiscard]] auto Key() const noexcept -> std::uint64_t { return key_; }

private:
    static constexpr auto Mix(std::uint64_t z) noexcept -> std::uint64_t
    {
        z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31U);
    }

    std::uint64_t key_{0};
    std::uint64_t counter_{0};
};

} // namespace treeforge

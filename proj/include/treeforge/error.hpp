// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treeforge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an expression does not fit the configured row capacity.
class CapacityError : public Error {
public:
    CapacityError(std::size_t required, std::size_t capacity)
        : Error("tree needs " + std::to_string(required) + " rows but capacity is " + std::to_string(capacity))
        , required_(required)
        , capacity_(capacity)
    {
    }

    [[nodiscard]] auto Required() const noexcept -> std::size_t { return required_; }
    [[nodiscard]] auto Capacity() const noexcept -> std::size_t { return capacity_; }

private:
    std::size_t required_;
    std::size_t capacity_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::string const& message, std::size_t line = 0)
        : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message)
        , line_(line)
    {
    }

    [[nodiscard]] auto Line() const noexcept -> std::size_t { return line_; }

private:
    std::size_t line_;
};

} // namespace treeforge

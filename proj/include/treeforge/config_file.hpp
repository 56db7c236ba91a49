// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace treeforge {

struct ConfigEntry {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line{0};
};

/// Sectioned key = value text. Blank lines and lines starting with '#' or
/// ';' are skipped; every key must follow a [section] header. Duplicate keys
/// within a section are an error.
auto ParseConfigText(std::string_view text) -> std::vector<ConfigEntry>;

auto ReadConfigFile(std::filesystem::path const& path) -> std::vector<ConfigEntry>;

} // namespace treeforge

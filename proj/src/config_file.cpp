// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The treeforge Authors

#include "treeforge/config_file.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "treeforge/error.hpp"

namespace treeforge {

namespace {

auto Trim(std::string_view s) -> std::string_view
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

auto ParseConfigText(std::string_view text) -> std::vector<ConfigEntry>
{
    std::vector<ConfigEntry> entries;
    std::set<std::pair<std::string, std::string>> seen;
    std::string section;
    std::size_t lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto const end = std::min(text.find('\n', pos), text.size());
        auto const line = Trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++lineNo;
        if (line.empty() || line.front() == '#' || line.front() == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("malformed section header", lineNo);
            }
            section = std::string(Trim(line.substr(1, line.size() - 2)));
            continue;
        }
        auto const eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected key = value", lineNo);
        }
        auto const key = Trim(line.substr(0, eq));
        auto const value = Trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("empty key", lineNo);
        }
        if (section.empty()) {
            throw ConfigError("key '" + std::string(key) + "' outside of a section", lineNo);
        }
        if (!seen.emplace(section, std::string(key)).second) {
            throw ConfigError("duplicate key '" + std::string(key) + "'", lineNo);
        }
        entries.push_back({section, std::string(key), std::string(value), lineNo});
    }
    return entries;
}

auto ReadConfigFile(std::filesystem::path const& path) -> std::vector<ConfigEntry>
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return ParseConfigText(buffer.str());
}

} // namespace treeforge

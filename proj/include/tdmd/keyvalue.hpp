// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tdmd {

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// skipped; keys and values are trimmed. Duplicate keys are rejected.
class KeyValueFile {
public:
    static KeyValueFile parse(std::istream& in);
    static KeyValueFile load(const std::string& path);

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
    [[nodiscard]] std::optional<std::string> get(const std::string& key) const;

    /// Typed accessors; each throws FormatError naming the key on a bad value.
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] std::size_t get_count(const std::string& key, std::size_t fallback) const;
    [[nodiscard]] std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    [[nodiscard]] std::vector<std::string> get_list(const std::string& key) const;

    /// Keys not in `known`; callers reject typos with this.
    [[nodiscard]] std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const;

private:
    std::map<std::string, std::string> values_;
};

[[nodiscard]] double parse_double(const std::string& text, const std::string& what);
[[nodiscard]] std::size_t parse_count(const std::string& text, const std::string& what);

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] std::string format_double(double v);

}  // namespace tdmd

// SPDX-License-Identifier: Apache-2.0
#include "tdmd/keyvalue.hpp"

#include "tdmd/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tdmd {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::istream& in) {
    KeyValueFile kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw FormatError("line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(body.substr(0, eq));
        if (key.empty()) throw FormatError("line " + std::to_string(lineno) + ": empty key");
        if (!kv.values_.emplace(key, trim(body.substr(eq + 1))).second) {
            throw FormatError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    return parse(in);
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    return v ? parse_double(*v, key) : fallback;
}

std::size_t KeyValueFile::get_count(const std::string& key, std::size_t fallback) const {
    const auto v = get(key);
    return v ? parse_count(*v, key) : fallback;
}

std::uint64_t KeyValueFile::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
        throw FormatError("'" + key + "': expected an unsigned integer, got '" + *v + "'");
    }
    return out;
}

std::vector<std::string> KeyValueFile::get_list(const std::string& key) const {
    std::vector<std::string> out;
    const auto v = get(key);
    if (!v) return out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::string> KeyValueFile::unknown_keys(const std::vector<std::string>& known) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) {
        if (std::find(known.begin(), known.end(), k) == known.end()) out.push_back(k);
    }
    return out;
}

double parse_double(const std::string& text, const std::string& what) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(out)) {
        throw FormatError("'" + what + "': expected a finite number, got '" + text + "'");
    }
    return out;
}

std::size_t parse_count(const std::string& text, const std::string& what) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw FormatError("'" + what + "': expected a non-negative integer, got '" + text + "'");
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace tdmd

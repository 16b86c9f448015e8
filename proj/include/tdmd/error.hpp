// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tdmd {

/// Broad failure classes. The CLI maps each one onto a process exit code.
enum class ErrorKind {
    usage,      ///< bad arguments or configuration values
    data,       ///< malformed files, shape or dimension mismatches
    numerical,  ///< rank deficiency, degenerate input, singular systems
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct UsageError : Error {
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error(ErrorKind::data, what) {}
};

struct FormatError : Error {
    explicit FormatError(const std::string& what) : Error(ErrorKind::data, what) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// Thrown when a requested truncation rank exceeds the numerical rank.
struct RankDeficientError : NumericalError {
    explicit RankDeficientError(const std::string& what) : NumericalError(what) {}
};

}  // namespace tdmd

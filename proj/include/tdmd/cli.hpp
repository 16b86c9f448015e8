// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tdmd::cli {

/// Process exit codes.
enum ExitCode : int { ok = 0, usage = 2, data_format = 3, numerical = 4 };

/// Runs one command line (without the program name). Results go to `out`;
/// failures print a single `error: <category>: <reason>` line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tdmd::cli

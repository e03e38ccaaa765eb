// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kptrack::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count for parallel commands: KPTRACK_THREADS when set to a
/// positive integer, otherwise the hardware concurrency (at least 1).
unsigned default_thread_count();

} // namespace kptrack::cli

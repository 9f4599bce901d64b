// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace finsler::cli {

/// Exit statuses shared by every command.
enum Exit : int { pass = 0, certified_failure = 1, usage_error = 2, numerical_failure = 3 };

/// Entry point of the `finsler` tool; reports go to `out` (or --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace finsler::cli

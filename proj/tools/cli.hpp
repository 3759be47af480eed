#pragma once

#include <iosfwd>

#include "pnn/common.hpp"

namespace pnn::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kValidation = 2, kNumeric = 3 };

// Validation problems (bad input) map to 2, numerical failures to 3.
int exit_code_for(ErrorKind kind);

// Entry point behind pnn-experiments; out/err stand in for stdout/stderr.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pnn::cli

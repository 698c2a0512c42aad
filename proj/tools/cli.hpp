#pragma once

#include <ostream>

namespace iontomo::cli {

enum ExitCode : int {
  kOk = 0,
  kThresholdFailure = 1,
  kUsageError = 2,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iontomo::cli

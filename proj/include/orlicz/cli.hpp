#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orlicz::cli {

enum ExitCode : int {
  kOk = 0,
  kCertificateFailed = 1,
  kSchemaError = 2,
  kNumericFailure = 3,
};

/// Runs one orlicz-cert command. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orlicz::cli

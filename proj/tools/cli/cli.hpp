#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qflow::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kInputError = 2,
  kResourceCap = 3,
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// 12 significant digits, '.' decimal point, independent of locale.
std::string format_number(double v);

// Runs a named suite; writes one line per check. Returns true when all pass.
bool run_verify_suite(const std::string& suite, std::ostream& out);

}  // namespace qflow::cli

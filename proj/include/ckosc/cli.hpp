#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ckosc::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kParseError = 2,
  kIndefinite = 3,
  kIntegrationError = 4,
  kConfigError = 5,
};

/// Runs one command; `args` excludes the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ckosc::cli

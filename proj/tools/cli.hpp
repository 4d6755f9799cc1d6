// Command-line front end, callable in-process for tests.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace picard {

enum ExitCode { kOk = 0, kUsage = 1, kVerificationFailed = 2, kMissingCache = 3, kReconstructionFailed = 4 };

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace picard

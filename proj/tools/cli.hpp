#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qnet::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kGoldenMismatch = 4,
};

// args excludes the program name. Output goes to `out` unless --out is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnet::cli

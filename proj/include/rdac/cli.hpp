#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdac::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kBitstream = 3 };

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace rdac::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace induced::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,      // bad flags, invalid input data, incompatible settings
  kNumerical = 3,  // singular overlaps, kernel mismatches, degenerate frames
  kIo = 4,
};

/// Entry point of the induced-transport tool. argv[0] is the program name.
/// Regular output goes to `out` unless --output names a file; diagnostics
/// go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace induced::cli

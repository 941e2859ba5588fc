#ifndef MLEL_CLI_H_
#define MLEL_CLI_H_

#include <iosfwd>

namespace mlel::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,     // solver or unexpected error
  kUsage = 2,       // bad flags or configuration
  kValidation = 3,  // parameters outside the model's domain
  kIo = 4,          // unreadable input or unwritable output
  kData = 5,        // malformed data file, layer without two-paths
};

// Entry point behind the `mlel` binary. Results go to `out`, progress and
// error messages to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mlel::cli

#endif  // MLEL_CLI_H_

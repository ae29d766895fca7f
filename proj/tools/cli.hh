#ifndef FLOYD_TOOLS_CLI_HH
#define FLOYD_TOOLS_CLI_HH

#include <ostream>
#include <string>
#include <vector>

namespace floyd {

/// Runs the command line `args` (without the program name). Returns the
/// exit code: 0 accept/equivalent/success, 1 reject/inequivalent, 2 usage
/// or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace floyd

#endif

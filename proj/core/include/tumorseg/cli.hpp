#ifndef TUMORSEG_CLI_HPP
#define TUMORSEG_CLI_HPP

#include <string>
#include <vector>

namespace tumorseg::cli {

// Parses and dispatches one invocation. args excludes the program name.
// Exit codes: 0 success, 1 validation/usage error, 2 I/O or parse error.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace tumorseg::cli

#endif

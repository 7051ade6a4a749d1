#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ecdflab {

// Command-line front end. Results go to `out` or to --output when given.
// Exit codes: 0 success, 2 usage/validation error, 1 runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ecdflab

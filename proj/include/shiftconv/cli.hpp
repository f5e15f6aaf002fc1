// cli.hpp
//
// Command-line front door.  Flags are --key value or --key=value pairs on
// top of an optional key=value config file; unknown keys are rejected and
// the fully resolved configuration is echoed as '#' comment lines at the
// top of every output.  Exit codes: 0 success, 1 validation/usage failure,
// 2 internal-consistency error.

#ifndef SHIFTCONV_CLI_HPP
#define SHIFTCONV_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace shiftconv {

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace shiftconv

#endif  // SHIFTCONV_CLI_HPP

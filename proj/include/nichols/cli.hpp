#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nichols {

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

// Runs the command line front end with argv[0] as the program name. Reports
// go to `out`, diagnostics to `err`; the return value is the process exit
// code.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nichols

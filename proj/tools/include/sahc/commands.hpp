#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sahc {

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_invalid = 2,     // parse or validation error
    exit_numerical = 3,   // ellipticity, non-convergence, ill-conditioning
    exit_cross_check = 4, // formula disagrees with a reference path or oracle
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Reports go to --output (or `out`); error objects go to
/// `err` and, when --output is set, to the output file as well.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::vector<int> parse_int_csv(const std::string& csv, const char* flag);
std::vector<double> parse_double_csv(const std::string& csv, const char* flag);

} // namespace sahc

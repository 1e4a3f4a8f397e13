#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlss {

// exit codes: 0 ok, 2 validation or usage error, 3 numerical non-convergence
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace nlss

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fdv {

/*
 * Command-line entry point. `args` excludes the program name. Returns the
 * process exit status: 0 on success, 1 on validation errors, 2 on runtime
 * errors. Failures print one line `code=<code>, msg=<message>` to `err`.
 *
 *   div | complexity | sample verify | witness | online run | coupling |
 *   estimate compare | estimate kl-knee
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdv

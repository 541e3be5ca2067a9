#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace resol {

// Runs one command-line invocation (without the program name). Returns the
// process exit code: 0 yes/accept/success, 1 no/reject/failure, 2 usage or
// input errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace resol

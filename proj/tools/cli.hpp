#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fcomp {

// Parses and runs one command line (program name excluded). Command output
// goes to `out`, diagnostics to `err`. Returns 0 on success, 1 for usage
// and validation errors, 2 when an iterative solver or a search gave out.
int cli_dispatch(std::vector<std::string> args, std::ostream& out,
                 std::ostream& err);

}  // namespace fcomp

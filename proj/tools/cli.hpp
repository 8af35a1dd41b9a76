#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ldp::cli {

/// Runs one command line (args[0] is the program name). Output goes to the
/// --out file when given, otherwise to `out`; diagnostics go to `err`.
/// Returns 0 on success, 1 on a domain or configuration error, 2 when a
/// numerical routine fails to converge.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ldp::cli

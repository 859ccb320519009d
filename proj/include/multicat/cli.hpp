#pragma once

#include <iosfwd>

namespace multicat {

/// `multicat query|repl|serve|check`. Exit codes: 0 ok, 1 query diagnostic
/// or law violation, 2 load or configuration error.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace multicat

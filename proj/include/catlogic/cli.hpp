#ifndef CATLOGIC_CLI_HPP
#define CATLOGIC_CLI_HPP

#include "catlogic/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace catlogic {

/// Full command dispatch.  `args` is argv without the program name.  The
/// rendered report goes to `out` unless --out redirects it to a file; usage
/// and input errors print one line on `err`.  Exit codes: 0 every check
/// passed, 1 a check failed (the report carries a counterexample), 2 usage
/// or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Cross-checks each implementation against its independent oracle:
/// classify vs the literal definitional search, is_sheaf vs one-step
/// amalgamation, site points vs poset filters, pp_implies and
/// pp_solution_set vs assignment sweeps.  Deterministic given the seed;
/// instance counts may vary with the seed, verdicts may not.  A zero budget
/// yields an empty (vacuously passing) report.
RunReport oracle_suite(std::uint64_t seed, int budget);

} // namespace catlogic

#endif

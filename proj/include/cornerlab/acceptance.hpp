#pragma once
#include <iosfwd>

namespace cornerlab {

// Runs the eight acceptance checks and prints one PASS/FAIL line per
// criterion with the measured numbers and the pinned tolerances.
// Returns the number of failed criteria.
int run_acceptance(std::ostream& os);

}  // namespace cornerlab

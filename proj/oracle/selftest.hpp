#pragma once

#include <iosfwd>

namespace tlx::oracle {

// Checks the core algorithms against the independent oracles on small random
// inputs. Prints one PASS/FAIL line per check and returns the failure count.
int run_selftest(std::ostream& out);

}  // namespace tlx::oracle

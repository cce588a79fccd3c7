#pragma once

#include <ostream>

namespace adaspec::selftest {

// End-to-end verification suite: reconstruction accuracy, the entropy
// scaling/invariance laws, the adaptive selection behavior on the synthetic
// test signals, and the frame diagnostics. Prints one PASS/FAIL line per
// criterion; returns true when all pass.
bool run_acceptance(std::ostream& out);

}  // namespace adaspec::selftest

#pragma once

#include <ostream>

namespace bcsq {

/// Fast invariant suite behind the `selftest` CLI subcommand: special-
/// function identities, the single-spin precession oracle, closed-run
/// conservation laws and the continuum-vs-discrete spectral check.
/// Returns the number of failed checks (0 = all green).
int run_selftest(std::ostream& out);

}  // namespace bcsq

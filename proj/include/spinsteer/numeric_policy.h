#pragma once

namespace spinsteer {

// Tolerances shared by every module. Construct once (the CLI does this from
// --tol) and pass it down; all defaults match the library's documented
// guarantees.
struct NumericPolicy {
  // Rank, linear-independence and group-membership decisions.
  double rank_tol = 1e-9;
  // Algebraic identities (unitarity of exponentials, commutation checks).
  double identity_tol = 1e-11;
  // Magnitudes below this are treated as exact zeros (degenerate branches,
  // vanishing brackets, zero-duration pruning).
  double zero_tol = 1e-12;
  // Per-segment endpoint tolerance for the modulated-segment integrator.
  double integrator_tol = 1e-10;
};

}  // namespace spinsteer

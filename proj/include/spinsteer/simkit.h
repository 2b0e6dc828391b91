#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spinsteer/mat_core.h"
#include "spinsteer/schedule.h"

namespace spinsteer {

// dX/dt = (drift + sum_i controls[i] u_i(t)) X; controls[0] takes u_x and
// controls[1] (if present) u_y.
struct BilinearSystem {
  SquareMatrix drift;
  std::vector<SquareMatrix> controls;

  int dim() const { return static_cast<int>(drift.rows()); }
};

struct SimOptions {
  double integrator_tol = NumericPolicy{}.integrator_tol;
  // Amplitude bound for warnings; infinite disables the check.
  double control_bound = std::numeric_limits<double>::infinity();
  bool keep_log = true;
  int max_doublings = 24;
};

struct SegmentLog {
  double t = 0.0;  // segment end time
  std::string description;
  cplx checksum;   // Tr X after the segment
};

struct SimResult {
  SquareMatrix endpoint;
  std::optional<double> residual_to_target;
  double unitarity_drift = 0.0;
  double total_time = 0.0;
  std::vector<SegmentLog> log;
  std::vector<std::string> warnings;
  // Largest ||X_N - X_2N|| accepted on a modulated segment.
  double max_step_change = 0.0;
};

// Constant segments use the exact exponential. Modulated segments use a
// fourth-order Magnus integrator, doubling the step count until the endpoint
// changes by less than integrator_tol.
SimResult simulate(const BilinearSystem& sys, const PulseSchedule& schedule,
                   const std::optional<SquareMatrix>& target = std::nullopt,
                   const SimOptions& options = {});

// Propagator of one segment (starting from the identity).
SquareMatrix segment_propagator(const BilinearSystem& sys, const PulseSegment& seg,
                                const SimOptions& options = {}, double* step_change = nullptr);

// Fixed-step Magnus propagator with n steps (used for convergence checks).
SquareMatrix magnus_propagator(const BilinearSystem& sys, const PulseSegment& seg, int steps);

struct VerifyReport {
  double residual = 0.0;
  int factor_count = 0;
  std::optional<int> lowenthal_bound;  // s + 1
  bool within_bound = true;
};

// Multiplies the factor exponentials; with psi given, compares the merged
// factor count against lowenthal_order(psi) + 1.
VerifyReport verify(const FactorSequence& sequence, const SquareMatrix& target,
                    std::optional<double> psi = std::nullopt);

}  // namespace spinsteer

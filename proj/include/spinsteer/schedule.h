#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinsteer/mat_core.h"

namespace spinsteer {

// Tags for the one-parameter subgroups a factor sequence is built from.
enum class Generator { Z1, Z2, A1, Bx, By, Bz, Drift };

std::string to_string(Generator g);
Generator generator_from_string(const std::string& name);

struct FactorStep {
  Generator gen;
  double duration;  // >= 0
};

// Ordered product of one-parameter subgroup factors. Steps are chronological:
// steps[0] acts first, so the represented matrix is
//   e^{G_last t_last} ... e^{G_first t_first}.
struct FactorSequence {
  std::vector<FactorStep> steps;
  // Steps before zero-duration pruning.
  std::vector<FactorStep> audit;
  std::map<Generator, SquareMatrix> generators;
  // Frobenius distance between product() and the target it was built for.
  double residual = 0.0;

  SquareMatrix product() const;
  int dim() const;
};

// Number of factors after merging runs of equal generators.
int merged_factor_count(const std::vector<FactorStep>& steps);

// Drops steps whose duration is <= tol.
std::vector<FactorStep> prune_zero_steps(const std::vector<FactorStep>& steps, double tol);

// Closed-form modulated control over one segment, tau in [0, dt]:
//   u_x = kbar cos(omega tau + phase),  u_y = sign_uy kbar sin(omega tau + phase).
struct Modulation {
  double kbar = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double sign_uy = -1.0;
};

struct PulseSegment {
  double dt = 0.0;
  double ux = 0.0;
  double uy = 0.0;
  std::optional<Modulation> mod;

  double ux_at(double tau) const;
  double uy_at(double tau) const;
  // Largest |u_x| or |u_y| the segment can reach.
  double peak_amplitude() const;
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;

  double total_time() const;
  bool empty() const { return segments.empty(); }
};

}  // namespace spinsteer

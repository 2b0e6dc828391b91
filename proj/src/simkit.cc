#include "spinsteer/simkit.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spinsteer/su2_decomp.h"

namespace spinsteer {
namespace {

SquareMatrix generator_at(const BilinearSystem& sys, const PulseSegment& seg, double tau) {
  SquareMatrix g = sys.drift;
  const double u[2] = {seg.ux_at(tau), seg.uy_at(tau)};
  for (std::size_t i = 0; i < sys.controls.size() && i < 2; ++i) g += u[i] * sys.controls[i];
  return g;
}

std::string describe(const PulseSegment& seg) {
  std::ostringstream os;
  os.precision(6);
  if (seg.mod) {
    os << "mod kbar=" << seg.mod->kbar << " omega=" << seg.mod->omega
       << " phase=" << seg.mod->phase;
  } else {
    os << "const ux=" << seg.ux << " uy=" << seg.uy;
  }
  return os.str();
}

void check_system(const BilinearSystem& sys, const PulseSchedule& schedule) {
  if (sys.drift.rows() == 0 || sys.drift.rows() != sys.drift.cols()) {
    throw std::invalid_argument("simulate: drift must be a square matrix");
  }
  for (const auto& b : sys.controls) {
    if (b.rows() != sys.drift.rows() || b.cols() != sys.drift.cols()) {
      throw std::invalid_argument("simulate: control dimension mismatch");
    }
  }
  for (const auto& seg : schedule.segments) {
    if (seg.dt < 0.0) throw std::invalid_argument("simulate: negative segment duration");
    const bool uses_y = seg.mod ? seg.mod->kbar != 0.0 : seg.uy != 0.0;
    if (uses_y && sys.controls.size() < 2) {
      throw std::invalid_argument("simulate: schedule drives u_y but the system has one control");
    }
  }
}

}  // namespace

SquareMatrix magnus_propagator(const BilinearSystem& sys, const PulseSegment& seg, int steps) {
  const double h = seg.dt / steps;
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const double w = std::sqrt(3.0) / 12.0 * h * h;
  SquareMatrix x = identity(sys.dim());
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const SquareMatrix g1 = generator_at(sys, seg, t + c1 * h);
    const SquareMatrix g2 = generator_at(sys, seg, t + c2 * h);
    const SquareMatrix omega = 0.5 * h * (g1 + g2) + w * commutator(g2, g1);
    x = expm(omega, 1.0) * x;
  }
  return x;
}

SquareMatrix segment_propagator(const BilinearSystem& sys, const PulseSegment& seg,
                                const SimOptions& options, double* step_change) {
  if (step_change) *step_change = 0.0;
  if (seg.dt == 0.0) return identity(sys.dim());
  if (!seg.mod) return expm(generator_at(sys, seg, 0.0), seg.dt);

  double rate = sys.drift.norm() + std::abs(seg.mod->omega);
  for (const auto& b : sys.controls) rate += std::abs(seg.mod->kbar) * b.norm();
  int steps = std::max(1, static_cast<int>(std::ceil(seg.dt * rate / 2.0)));
  SquareMatrix coarse = magnus_propagator(sys, seg, steps);
  for (int d = 0; d < options.max_doublings; ++d) {
    steps *= 2;
    SquareMatrix fine = magnus_propagator(sys, seg, steps);
    const double change = distance(coarse, fine);
    if (change < options.integrator_tol) {
      if (step_change) *step_change = change;
      return fine;
    }
    coarse = std::move(fine);
  }
  throw std::runtime_error("simulate: modulated segment did not converge");
}

SimResult simulate(const BilinearSystem& sys, const PulseSchedule& schedule,
                   const std::optional<SquareMatrix>& target, const SimOptions& options) {
  check_system(sys, schedule);
  SimResult out;
  SquareMatrix x = identity(sys.dim());
  double t = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const PulseSegment& seg = schedule.segments[i];
    if (seg.peak_amplitude() > options.control_bound * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "segment " << i << " at t=" << t << ": amplitude " << seg.peak_amplitude()
         << " exceeds bound " << options.control_bound;
      out.warnings.push_back(os.str());
    }
    double change = 0.0;
    x = segment_propagator(sys, seg, options, &change) * x;
    out.max_step_change = std::max(out.max_step_change, change);
    const double next = t + seg.dt;
    comp += std::abs(t) >= std::abs(seg.dt) ? (t - next) + seg.dt : (seg.dt - next) + t;
    t = next;
    if (options.keep_log) out.log.push_back({t + comp, describe(seg), x.trace()});
  }
  out.endpoint = x;
  out.total_time = t + comp;
  out.unitarity_drift = (x * x.adjoint() - identity(sys.dim())).norm();
  if (target) {
    if (target->rows() != x.rows() || target->cols() != x.cols()) {
      throw std::invalid_argument("simulate: target dimension mismatch");
    }
    out.residual_to_target = distance(x, *target);
  }
  return out;
}

VerifyReport verify(const FactorSequence& sequence, const SquareMatrix& target,
                    std::optional<double> psi) {
  VerifyReport r;
  if (sequence.steps.empty()) {
    r.residual = distance(identity(static_cast<int>(target.rows())), target);
  } else {
    r.residual = distance(sequence.product(), target);
  }
  r.factor_count = merged_factor_count(sequence.steps);
  if (psi) {
    r.lowenthal_bound = su2::lowenthal_order(*psi) + 1;
    r.within_bound = r.factor_count <= *r.lowenthal_bound;
  }
  return r;
}

}  // namespace spinsteer

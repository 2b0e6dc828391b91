#include "spinsteer/su2_decomp.h"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace spinsteer::su2 {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kFourPi = 4.0 * M_PI;

double frob(const SquareMatrix& x) { return x.norm(); }

void require_su2_algebra(const SquareMatrix& x, const char* what, const NumericPolicy& policy) {
  if (x.rows() != 2 || x.cols() != 2) {
    throw std::invalid_argument(std::string(what) + " must be 2x2");
  }
  const double scale = std::max(1.0, frob(x));
  if (!is_skew_hermitian(x, policy.rank_tol * scale)) {
    throw std::invalid_argument(std::string(what) + " must be skew-Hermitian");
  }
  if (std::abs(x.trace()) > policy.rank_tol * scale) {
    throw std::invalid_argument(std::string(what) + " must be traceless");
  }
}

void require_su2(const SquareMatrix& x, const NumericPolicy& policy) {
  if (x.rows() != 2 || x.cols() != 2) throw std::invalid_argument("target must be 2x2");
  if (!is_unitary(x, policy.rank_tol) || !is_special(x, policy.rank_tol)) {
    throw std::invalid_argument("target is not in SU(2)");
  }
}

double wrap(double angle, double period) {
  double r = std::fmod(angle, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

// A = ratio * B within rank_tol, ratio = <A,B>/<B,B>.
bool proportional_ratio(const SquareMatrix& a, const SquareMatrix& b, double* ratio,
                        const NumericPolicy& policy) {
  const double bb = real_inner(b, b);
  const double r = real_inner(a, b) / bb;
  if (ratio) *ratio = r;
  return frob(a - r * b) <= policy.rank_tol * std::max(frob(a), frob(b) * std::abs(r));
}

PulseSchedule schedule_from(const FactorSequence& seq, double M) {
  PulseSchedule out;
  for (const auto& step : seq.steps) {
    PulseSegment seg;
    seg.dt = step.duration;
    seg.ux = step.gen == Generator::Z1 ? M : -M;
    out.segments.push_back(seg);
  }
  return out;
}

}  // namespace

void Su2Problem::validate(const NumericPolicy& policy) const {
  require_su2_algebra(A, "A", policy);
  require_su2_algebra(B, "B", policy);
  if (frob(B) <= policy.zero_tol) throw std::invalid_argument("B must be nonzero");
  if (!(M > 0.0)) throw std::invalid_argument("control bound M must be positive");
}

bool Su2Problem::proportional(const NumericPolicy& policy) const {
  return proportional_ratio(A, B, nullptr, policy);
}

double control_authority(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("control_authority: dimension mismatch");
  }
  const double bb = real_inner(b, b);
  if (bb <= 0.0) throw std::invalid_argument("control_authority: B = 0");
  return std::sqrt(real_inner(a, a) / bb);
}

double psi_angle(const SquareMatrix& z1, const SquareMatrix& z2) {
  const double n1 = std::sqrt(real_inner(z1, z1));
  const double n2 = std::sqrt(real_inner(z2, z2));
  if (n1 == 0.0 || n2 == 0.0) throw std::invalid_argument("psi_angle: zero generator");
  const double psi = real_inner(z1, z2) / (n1 * n2);
  if (std::abs(psi) >= 1.0 - 1e-12) {
    throw std::domain_error("psi_angle: generators are proportional");
  }
  return psi;
}

double psi_of_M(const Su2Problem& problem, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("psi_of_M: M must be positive");
  const double bb = real_inner(problem.B, problem.B);
  if (bb <= 0.0) throw std::invalid_argument("psi_of_M: B = 0");
  const double k = control_authority(problem.A, problem.B);
  const double k2 = k * k;
  const double mu = real_inner(problem.A, problem.B) / bb;
  const double m2 = M * M;
  const double den2 = (k2 + m2) * (k2 + m2) - 4.0 * m2 * mu * mu;
  if (!(den2 > 0.0)) throw std::domain_error("psi_of_M: A and B are proportional");
  // (k - M)(k + M) vanishes exactly at M = k.
  return std::abs((k - M) * (k + M)) / std::sqrt(den2);
}

int lowenthal_f(double psi, const NumericPolicy& policy) {
  const double p = std::abs(psi);
  if (p >= 1.0) throw std::domain_error("lowenthal_order: |psi| must be < 1");
  if (p <= policy.zero_tol) return 0;
  for (long f = 2;; ++f) {
    if (std::cos(M_PI / f) < p && p <= std::cos(M_PI / (f + 1))) return static_cast<int>(f);
    if (f > 1'000'000'000L) throw std::domain_error("lowenthal_order: |psi| too close to 1");
  }
}

int lowenthal_order(double psi, const NumericPolicy& policy) {
  const int f = lowenthal_f(psi, policy);
  return f == 0 ? 3 : f + 2;
}

CanonicalFrame canonical_frame(const SquareMatrix& z1, const SquareMatrix& z2,
                               const NumericPolicy& policy, double phase_hint) {
  require_su2_algebra(z1, "Z1", policy);
  require_su2_algebra(z2, "Z2", policy);
  if (frob(z1) <= policy.zero_tol || frob(z2) <= policy.zero_tol) {
    throw std::invalid_argument("canonical_frame: zero generator");
  }

  // H = i Z1 is Hermitian with eigenvalues -lambda1, +lambda1 (ascending).
  const Eigen::Matrix2cd h = kI * z1;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(h);
  const double lambda1 = eig.eigenvalues()(1);
  Eigen::Matrix2cd v;
  v.col(0) = eig.eigenvectors().col(1) * std::polar(1.0, phase_hint);
  v.col(1) = eig.eigenvectors().col(0);
  const SquareMatrix t1 = v.adjoint();

  const SquareMatrix m = t1 * z2 * t1.adjoint();
  const cplx w = (kI * m)(1, 0);
  const double r = 2.0 * std::abs(w);
  const double c = 2.0 * (kI * m)(0, 0).real();
  if (r <= policy.rank_tol * frob(z2)) {
    throw std::domain_error("canonical_frame: Z2 is parallel to Z1");
  }
  SquareMatrix t2 = identity(2);
  t2(1, 1) = kI * std::conj(w) / std::abs(w);

  CanonicalFrame frame;
  frame.Z1 = z1;
  frame.Z2 = z2;
  frame.W = t2 * t1;
  frame.lambda1 = lambda1;
  frame.lambda2 = 0.5 * std::hypot(c, r);
  frame.c = c;
  frame.psi = c / (2.0 * frame.lambda2);
  return frame;
}

SquareMatrix EulerTriple::matrix() const {
  return expm_su2(-kI * pauli::sz(), alpha) * expm_su2(-kI * pauli::sy(), beta) *
         expm_su2(-kI * pauli::sz(), gamma);
}

EulerTriple euler_extract(const SquareMatrix& x, const NumericPolicy& policy) {
  if (x.rows() != 2 || x.cols() != 2) throw std::invalid_argument("euler_extract: not 2x2");
  const cplx lower = x(1, 0);  // e^{i(alpha-gamma)/2} sin(beta/2)
  const cplx diag = x(1, 1);   // e^{i(alpha+gamma)/2} cos(beta/2)
  EulerTriple e;
  if (std::abs(lower) <= policy.zero_tol) {
    e.alpha = wrap(2.0 * std::arg(diag), kFourPi);
  } else if (std::abs(diag) <= policy.zero_tol) {
    e.beta = M_PI;
    e.alpha = wrap(2.0 * std::arg(lower), kFourPi);
  } else {
    e.beta = 2.0 * std::atan2(std::abs(lower), std::abs(diag));
    const double p = 2.0 * std::arg(diag);
    const double q = 2.0 * std::arg(lower);
    e.alpha = wrap(0.5 * (p + q), kFourPi);
    e.gamma = wrap(0.5 * (p - q), kFourPi);
  }
  return e;
}

int admissible_m(double beta, double psi) {
  const double p2 = psi * psi;
  if (p2 >= 1.0) throw std::domain_error("admissible_m: |psi| must be < 1");
  int m = 1;
  while (true) {
    const double cb = std::cos(beta / (2.0 * m));
    if (cb * cb >= p2) return m;
    ++m;
  }
}

Su2Factorization factorize_theorem2(const CanonicalFrame& frame, const SquareMatrix& x_f,
                                    const NumericPolicy& policy) {
  if (x_f.rows() != frame.W.rows() || x_f.cols() != frame.W.cols()) {
    throw std::invalid_argument("factorize_theorem2: frame/target dimension mismatch");
  }
  require_su2(x_f, policy);

  Su2Factorization out;
  out.frame = frame;
  Theorem2Params& p = out.params;
  p.euler = euler_extract(frame.W * x_f * frame.W.adjoint(), policy);

  const double psi = std::abs(frame.psi) <= policy.zero_tol ? 0.0 : frame.psi;
  const double beta = p.euler.beta;
  p.m = admissible_m(beta, psi);

  const double half = beta / (2.0 * p.m);
  const double cb = std::cos(half);
  const double h =
      std::atan2(std::sin(half), std::sqrt(std::max(0.0, (cb - psi) * (cb + psi))));
  p.t2 = h / frame.lambda2;
  if (std::abs(h - M_PI / 2.0) < 1e-12) {
    p.phi = psi > 0 ? -M_PI / 2.0 : (psi < 0 ? M_PI / 2.0 : 0.0);
  } else {
    p.phi = std::atan2(-psi * std::sin(h), std::cos(h));
  }
  p.t1 = (p.phi >= 0 ? p.phi : kTwoPi + p.phi) / (2.0 * frame.lambda1);
  p.t3 = p.t1;

  FactorSequence& seq = out.sequence;
  seq.generators[Generator::Z1] = frame.Z1;
  seq.generators[Generator::Z2] = frame.Z2;
  seq.audit.push_back({Generator::Z1, p.euler.gamma / (2.0 * frame.lambda1)});
  for (int i = 0; i < p.m; ++i) {
    seq.audit.push_back({Generator::Z1, p.t3});
    seq.audit.push_back({Generator::Z2, p.t2});
    seq.audit.push_back({Generator::Z1, p.t1});
  }
  seq.audit.push_back({Generator::Z1, p.euler.alpha / (2.0 * frame.lambda1)});
  seq.steps = prune_zero_steps(seq.audit, policy.zero_tol);
  seq.residual = distance(seq.product(), x_f);
  return out;
}

PulseSchedule steer_theorem1(const SquareMatrix& a, const SquareMatrix& b, const SquareMatrix& x_f,
                             const NumericPolicy& policy) {
  require_su2_algebra(a, "A", policy);
  require_su2_algebra(b, "B", policy);
  if (frob(a) <= policy.zero_tol) throw std::invalid_argument("steer_theorem1: A = 0");
  if (frob(b) <= policy.zero_tol) throw std::invalid_argument("steer_theorem1: B = 0");
  if (proportional_ratio(a, b, nullptr, policy)) {
    throw std::domain_error("steer_theorem1: A and B are linearly dependent");
  }
  require_su2(x_f, policy);

  const double k = control_authority(a, b);
  const CanonicalFrame frame = canonical_frame(a + k * b, a - k * b, policy);
  const EulerTriple e = euler_extract(frame.W * x_f * frame.W.adjoint(), policy);
  const double lambda = 2.0 * frame.lambda1;
  const double r = std::sqrt(std::max(0.0, 4.0 * frame.lambda2 * frame.lambda2 - frame.c * frame.c));

  PulseSchedule out;
  const double durations[3] = {e.gamma / lambda, e.beta / r, e.alpha / lambda};
  const double values[3] = {k, -k, k};
  for (int i = 0; i < 3; ++i) {
    if (durations[i] > policy.zero_tol) out.segments.push_back({durations[i], values[i], 0.0, {}});
  }
  return out;
}

PulseSchedule steer_proportional(const Su2Problem& problem, const SquareMatrix& x_f,
                                 const NumericPolicy& policy) {
  problem.validate(policy);
  require_su2(x_f, policy);
  double ratio = 0.0;
  if (!proportional_ratio(problem.A, problem.B, &ratio, policy)) {
    throw std::domain_error("steer_proportional: A is not a multiple of B");
  }

  // e^{B s} has period 2 pi / lambda_B, lambda_B the eigenphase of B.
  const double lambda_b = std::sqrt(std::norm(problem.B(0, 0)) + std::norm(problem.B(0, 1)));
  const double period = kTwoPi / lambda_b;

  double s = 0.0;
  const Su2Log lg = logm_su2(x_f, policy);
  if (lg.degenerate) {
    s = period / 2.0;
  } else if (frob(lg.log) > policy.zero_tol) {
    const double bb = real_inner(problem.B, problem.B);
    s = real_inner(lg.log, problem.B) / bb;
    if (frob(lg.log - s * problem.B) > policy.rank_tol * std::max(1.0, frob(lg.log))) {
      throw std::domain_error(
          "steer_proportional: target is outside the one-parameter subgroup e^{Bs}");
    }
  }
  s = wrap(s, period);

  PulseSchedule out;
  if (s <= policy.zero_tol) return out;
  const double M = problem.M;
  PulseSegment seg;
  if (ratio + M > policy.zero_tol) {
    seg.ux = M;
    seg.dt = s / (ratio + M);
  } else {
    seg.ux = -M;
    seg.dt = (s - period) / (ratio - M);
  }
  out.segments.push_back(seg);
  return out;
}

PulseSchedule steer_theorem3(const Su2Problem& problem, const SquareMatrix& x_f,
                             const NumericPolicy& policy) {
  problem.validate(policy);
  if (problem.proportional(policy)) return steer_proportional(problem, x_f, policy);
  const CanonicalFrame frame = canonical_frame(problem.z1(), problem.z2(), policy);
  return schedule_from(factorize_theorem2(frame, x_f, policy).sequence, problem.M);
}

namespace {

struct Conjugators {
  PulseSchedule to;
  PulseSchedule from;
};

Conjugators conjugator_schedules(const Su2Problem& problem, const NumericPolicy& policy) {
  problem.validate(policy);
  if (problem.proportional(policy)) {
    throw std::domain_error("pad_to_time: proportional A, B admit no padding sandwich");
  }
  const CanonicalFrame frame = canonical_frame(problem.z1(), problem.z2(), policy);
  // e^{i S_y pi} = [[0, 1], [-1, 0]].
  SquareMatrix flip = SquareMatrix::Zero(2, 2);
  flip(0, 1) = 1.0;
  flip(1, 0) = -1.0;
  const SquareMatrix c1 = frame.W.adjoint() * flip * frame.W;
  Conjugators out;
  out.to = schedule_from(factorize_theorem2(frame, c1, policy).sequence, problem.M);
  out.from = schedule_from(factorize_theorem2(frame, -c1, policy).sequence, problem.M);
  return out;
}

}  // namespace

PaddingBudget padding_budget(const Su2Problem& problem, const NumericPolicy& policy) {
  const Conjugators c = conjugator_schedules(problem, policy);
  return {c.to.total_time(), c.from.total_time()};
}

PulseSchedule pad_to_time(const Su2Problem& problem, const PulseSchedule& schedule,
                          double t_target, const NumericPolicy& policy) {
  const Conjugators c = conjugator_schedules(problem, policy);
  const double base = schedule.total_time();
  const double minimum = base + c.to.total_time() + c.from.total_time();
  const double slack = t_target - minimum;
  if (slack < -policy.identity_tol * std::max(1.0, std::abs(t_target))) {
    throw std::domain_error("pad_to_time: target time below the minimum padding time");
  }
  const double t_bar = std::max(0.0, slack / 2.0);

  // C1 e^{Z1 t} = e^{-Z1 t} C1 and C2 C1 = I.
  PulseSchedule out = schedule;
  const auto append = [&out](const PulseSchedule& s) {
    out.segments.insert(out.segments.end(), s.segments.begin(), s.segments.end());
  };
  if (t_bar > 0.0) out.segments.push_back({t_bar, problem.M, 0.0, {}});
  append(c.to);
  if (t_bar > 0.0) out.segments.push_back({t_bar, problem.M, 0.0, {}});
  append(c.from);
  return out;
}

}  // namespace spinsteer::su2

#pragma once

#include "spinsteer/mat_core.h"
#include "spinsteer/schedule.h"

namespace spinsteer::su2 {

// One-spin bilinear system dX/dt = (A + B u) X, |u| <= M, A and B in su(2).
struct Su2Problem {
  SquareMatrix A;
  SquareMatrix B;
  double M = 1.0;

  // Checks shapes, skew-Hermiticity, zero trace, B != 0 and M > 0.
  void validate(const NumericPolicy& policy = {}) const;
  // True when A is a real multiple of B (including A = 0).
  bool proportional(const NumericPolicy& policy = {}) const;

  SquareMatrix z1() const { return A + M * B; }
  SquareMatrix z2() const { return A - M * B; }
};

// k = sqrt(<A,A> / <B,B>), the drift-to-control strength ratio.
double control_authority(const SquareMatrix& a, const SquareMatrix& b);

// Cosine of the angle between Z1 and Z2 under the trace inner product.
// Throws std::domain_error when |psi| >= 1 - 1e-12 (proportional generators).
double psi_angle(const SquareMatrix& z1, const SquareMatrix& z2);

// |psi| of (A + M B, A - M B) written through k and <A,B>/<B,B>.
double psi_of_M(const Su2Problem& problem, double M);

// Order of generation: 3 when psi = 0, else f + 2 with
// cos(pi/f) < |psi| <= cos(pi/(f+1)), f >= 2.
int lowenthal_order(double psi, const NumericPolicy& policy = {});
// The f of the bracketing inequality above (0 when psi = 0).
int lowenthal_f(double psi, const NumericPolicy& policy = {});

// Coordinates in which Z1 = -i 2 lambda1 S_z and Z2 = -i(c S_z + r S_y), r > 0.
struct CanonicalFrame {
  SquareMatrix Z1;
  SquareMatrix Z2;
  SquareMatrix W;  // unitary, W = T2 T1
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double psi = 0.0;
  double c = 0.0;
};

// phase_hint rotates the eigenvector phases of T1; every value yields a
// valid frame (they differ by an overall phase of W).
CanonicalFrame canonical_frame(const SquareMatrix& z1, const SquareMatrix& z2,
                               const NumericPolicy& policy = {}, double phase_hint = 0.0);

// X = e^{-i S_z alpha} e^{-i S_y beta} e^{-i S_z gamma},
// alpha, gamma in [0, 4 pi), beta in [0, pi].
struct EulerTriple {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  SquareMatrix matrix() const;
};

// Tie-breaks: beta = 0 or beta = pi sets gamma = 0.
EulerTriple euler_extract(const SquareMatrix& x, const NumericPolicy& policy = {});

// Smallest m >= 1 with cos^2(beta / 2m) >= psi^2.
int admissible_m(double beta, double psi);

struct Theorem2Params {
  EulerTriple euler;
  int m = 1;
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double phi = 0.0;
};

struct Su2Factorization {
  FactorSequence sequence;
  Theorem2Params params;
  CanonicalFrame frame;

  int inner_factor_count() const { return 2 * params.m + 1; }
};

// X_f = e^{Z1 alpha/2l1} (e^{Z1 t1} e^{Z2 t2} e^{Z1 t3})^m e^{Z1 gamma/2l1}.
// The sequence is chronological (the gamma block acts first).
Su2Factorization factorize_theorem2(const CanonicalFrame& frame, const SquareMatrix& x_f,
                                    const NumericPolicy& policy = {});

// Three bang-bang segments u = (k, -k, k) with the Euler parameters of the
// target in the canonical frame of A +- kB.
PulseSchedule steer_theorem1(const SquareMatrix& a, const SquareMatrix& b, const SquareMatrix& x_f,
                             const NumericPolicy& policy = {});

// Bang-bang schedule with values +-M from the Theorem-2 factors: Z1 factors
// become u = +M, Z2 factors u = -M. Proportional A, B are routed to
// steer_proportional.
PulseSchedule steer_theorem3(const Su2Problem& problem, const SquareMatrix& x_f,
                             const NumericPolicy& policy = {});

// A = c B: X(t) = e^{B (c t + int u)}, so only targets on the subgroup e^{Bs}
// are reachable; one constant segment. Throws std::domain_error otherwise.
PulseSchedule steer_proportional(const Su2Problem& problem, const SquareMatrix& x_f,
                                 const NumericPolicy& policy = {});

// Times of the two conjugator schedules the padding sandwich needs.
struct PaddingBudget {
  double to_conjugator = 0.0;   // steer to W* e^{iS_y pi} W
  double from_conjugator = 0.0; // steer to W* e^{-iS_y pi} W
  double minimum() const { return to_conjugator + from_conjugator; }
};

PaddingBudget padding_budget(const Su2Problem& problem, const NumericPolicy& policy = {});

// Appends  Z1 for t_bar, steer to the conjugator, Z1 for t_bar, steer back.
// The endpoint is unchanged and the total time becomes exactly t_target.
// Throws std::domain_error if t_target < total + padding minimum.
PulseSchedule pad_to_time(const Su2Problem& problem, const PulseSchedule& schedule,
                          double t_target, const NumericPolicy& policy = {});

}  // namespace spinsteer::su2

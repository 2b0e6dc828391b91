#include <gtest/gtest.h>

#include <cmath>

#include "spinsteer/su2_decomp.h"
#include "test_support.h"

namespace spinsteer::su2 {
namespace {

using testing::Rng;
using testing::series_expm;

const SquareMatrix kSx = -kI * pauli::sx();
const SquareMatrix kSy = -kI * pauli::sy();
const SquareMatrix kSz = -kI * pauli::sz();

// Independent propagator for constant one-spin segments.
SquareMatrix propagate(const SquareMatrix& a, const SquareMatrix& b, const PulseSchedule& s) {
  SquareMatrix x = identity(2);
  for (const auto& seg : s.segments) x = (series_expm(a + b * seg.ux, seg.dt) * x).eval();
  return x;
}

Su2Problem random_problem(Rng& rng, double m_over_k) {
  Su2Problem p{rng.su(2), rng.su(2), 1.0};
  p.M = m_over_k * control_authority(p.A, p.B);
  return p;
}

// psi straight from the trace inner product.
double psi_oracle(const SquareMatrix& z1, const SquareMatrix& z2) {
  return inner_product(z1, z2).real() /
         std::sqrt(inner_product(z1, z1).real() * inner_product(z2, z2).real());
}

TEST(ControlAuthority, Examples) {
  EXPECT_NEAR(control_authority(kSz, kSy), 1.0, 1e-15);
  EXPECT_NEAR(control_authority(2.0 * kSz, kSy), 2.0, 1e-15);
  EXPECT_EQ(control_authority(SquareMatrix::Zero(2, 2), kSy), 0.0);
  EXPECT_THROW(control_authority(kSz, SquareMatrix::Zero(2, 2)), std::invalid_argument);
}

TEST(PsiAngle, Examples) {
  EXPECT_NEAR(psi_angle(kSz, kSy), 0.0, 1e-15);
  EXPECT_THROW(psi_angle(kSz, kSz), std::domain_error);
  Rng rng(20);
  for (int i = 0; i < 100; ++i) {
    const SquareMatrix z1 = rng.su(2), z2 = rng.su(2), w = rng.haar_unitary(2);
    EXPECT_NEAR(psi_angle(w * z1 * w.adjoint(), w * z2 * w.adjoint()), psi_angle(z1, z2), 1e-12);
  }
}

TEST(PsiOfM, Examples) {
  Rng rng(21);
  const Su2Problem p{kSz, kSy, 1.0};
  EXPECT_EQ(psi_of_M(p, 1.0), 0.0);
  EXPECT_NEAR(psi_of_M(p, 1e-6), 1.0, 1e-11);
  EXPECT_LT(psi_of_M(p, 1e-6), 1.0);
  for (int i = 0; i < 100; ++i) {
    const Su2Problem q = random_problem(rng, rng.uniform(0.05, 20.0));
    EXPECT_NEAR(psi_of_M(q, q.M), std::abs(psi_oracle(q.z1(), q.z2())), 1e-12);
  }
}

TEST(PsiOfM, ShapeOnLogGrid) {
  Rng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const Su2Problem p = random_problem(rng, 1.0);
    const double k = control_authority(p.A, p.B);
    EXPECT_EQ(psi_of_M(p, k), 0.0);
    double prev = 2.0;
    for (int i = 0; i <= 100; ++i) {
      const double M = k * std::pow(10.0, -3.0 + 3.0 * i / 100.0);
      const double v = psi_of_M(p, M);
      if (i < 100) EXPECT_LT(v, prev);
      prev = v;
    }
    prev = -1.0;
    for (int i = 1; i <= 100; ++i) {
      const double M = k * std::pow(10.0, 3.0 * i / 100.0);
      const double v = psi_of_M(p, M);
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(LowenthalOrder, Examples) {
  EXPECT_EQ(lowenthal_order(0.0), 3);
  EXPECT_EQ(lowenthal_order(0.5), 4);
  EXPECT_EQ(lowenthal_order(0.8), 6);
  EXPECT_EQ(lowenthal_order(-0.8), 6);
  EXPECT_THROW(lowenthal_order(1.0), std::domain_error);
}

TEST(LowenthalOrder, BracketProperty) {
  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    const double psi = rng.uniform(1e-6, 0.999);
    const int f = lowenthal_f(psi);
    EXPECT_GE(f, 2);
    EXPECT_LT(std::cos(M_PI / f), psi);
    EXPECT_LE(psi, std::cos(M_PI / (f + 1)));
    EXPECT_EQ(lowenthal_order(psi), f + 2);
  }
}

void expect_frame_valid(const CanonicalFrame& f, const SquareMatrix& z1, const SquareMatrix& z2) {
  const SquareMatrix w = f.W;
  EXPECT_TRUE(is_unitary(w, 1e-12));
  EXPECT_LT(distance(w * z1 * w.adjoint(), 2.0 * f.lambda1 * kSz), 1e-10);
  const SquareMatrix y = w * z2 * w.adjoint();
  EXPECT_NEAR(real_inner(y, kSx), 0.0, 1e-10);
  EXPECT_GT(real_inner(y, kSy), 0.0);
  EXPECT_GT(f.lambda1, 0.0);
  EXPECT_GT(f.lambda2, 0.0);
  // Eigenphase magnitudes.
  EXPECT_NEAR(f.lambda1, std::abs(Eigen::ComplexEigenSolver<SquareMatrix>(z1).eigenvalues()(0)), 1e-12);
  EXPECT_NEAR(f.lambda2, std::abs(Eigen::ComplexEigenSolver<SquareMatrix>(z2).eigenvalues()(0)), 1e-12);
  EXPECT_NEAR(f.psi, psi_oracle(z1, z2), 1e-12);
}

TEST(CanonicalFrame, AlreadyCanonical) {
  const CanonicalFrame f = canonical_frame(2.0 * kSz, kSy);
  EXPECT_NEAR(f.lambda1, 1.0, 1e-15);
  EXPECT_NEAR(f.lambda2, 0.5, 1e-15);
  EXPECT_NEAR(f.psi, 0.0, 1e-15);
  // W = I up to a phase.
  EXPECT_NEAR(std::abs(f.W(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f.W(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(f.W(1, 1) / f.W(0, 0) - 1.0), 0.0, 1e-14);
}

TEST(CanonicalFrame, XToZ) {
  const CanonicalFrame f = canonical_frame(kSx, kSz);
  EXPECT_NEAR(f.lambda1, 0.5, 1e-15);
  EXPECT_LT(distance(f.W * kSx * f.W.adjoint(), kSz), 1e-12);
  expect_frame_valid(f, kSx, kSz);
}

TEST(CanonicalFrame, RandomPairsAndPhaseHints) {
  Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    const SquareMatrix z1 = rng.su(2), z2 = rng.su(2);
    expect_frame_valid(canonical_frame(z1, z2, {}, rng.uniform(0, 6.3)), z1, z2);
  }
  EXPECT_THROW(canonical_frame(kSz, 3.0 * kSz), std::domain_error);
}

SquareMatrix euler_oracle(double a, double b, double g) {
  return series_expm(kSz, a) * series_expm(kSy, b) * series_expm(kSz, g);
}

TEST(EulerExtract, Examples) {
  const EulerTriple e0 = euler_extract(identity(2));
  EXPECT_NEAR(e0.alpha, 0.0, 1e-15);
  EXPECT_NEAR(e0.beta, 0.0, 1e-15);
  EXPECT_NEAR(e0.gamma, 0.0, 1e-15);
  const EulerTriple e1 = euler_extract(expm(kSz, M_PI / 2));
  EXPECT_NEAR(e1.alpha, M_PI / 2, 1e-14);
  EXPECT_NEAR(e1.beta, 0.0, 1e-15);
  EXPECT_EQ(e1.gamma, 0.0);
  const EulerTriple e2 = euler_extract(expm(kSy, M_PI) * expm(kSz, 0.7));
  EXPECT_NEAR(e2.beta, M_PI, 1e-14);
  EXPECT_EQ(e2.gamma, 0.0);
  EXPECT_LT(distance(euler_oracle(e2.alpha, e2.beta, e2.gamma), expm(kSy, M_PI) * expm(kSz, 0.7)), 1e-12);
}

TEST(EulerExtract, RoundTripAndRanges) {
  Rng rng(25);
  for (int i = 0; i < 500; ++i) {
    const SquareMatrix x = rng.haar_special(2);
    const EulerTriple e = euler_extract(x);
    EXPECT_GE(e.alpha, 0.0);
    EXPECT_LT(e.alpha, 4 * M_PI);
    EXPECT_GE(e.gamma, 0.0);
    EXPECT_LT(e.gamma, 4 * M_PI);
    EXPECT_GE(e.beta, 0.0);
    EXPECT_LE(e.beta, M_PI);
    EXPECT_LT(distance(euler_oracle(e.alpha, e.beta, e.gamma), x), 1e-10);
    EXPECT_LT(distance(e.matrix(), x), 1e-10);
  }
}

TEST(AdmissibleM, MinimalAndExamples) {
  EXPECT_EQ(admissible_m(M_PI, 0.8), 3);
  EXPECT_EQ(admissible_m(M_PI, 0.0), 1);
  EXPECT_EQ(admissible_m(0.0, 0.95), 1);
  Rng rng(26);
  for (int i = 0; i < 1000; ++i) {
    const double beta = rng.uniform(0, M_PI), psi = rng.uniform(-0.99, 0.99);
    const int m = admissible_m(beta, psi);
    EXPECT_GE(std::pow(std::cos(beta / (2 * m)), 2), psi * psi);
    if (m > 1) EXPECT_LT(std::pow(std::cos(beta / (2 * (m - 1))), 2), psi * psi);
  }
}

TEST(Theorem2, PsiZeroReducesToThreeFactors) {
  const CanonicalFrame f = canonical_frame(2.0 * kSz, kSy);
  Rng rng(27);
  for (int i = 0; i < 50; ++i) {
    const SquareMatrix x = rng.haar_special(2);
    const Su2Factorization r = factorize_theorem2(f, x);
    EXPECT_EQ(r.params.m, 1);
    EXPECT_NEAR(r.params.t2, r.params.euler.beta / (2 * f.lambda2), 1e-12);
    EXPECT_NEAR(r.params.phi, 0.0, 1e-15);
    EXPECT_NEAR(r.params.t1, 0.0, 1e-15);
    EXPECT_LE(r.sequence.steps.size(), 3u);
    EXPECT_LT(r.sequence.residual, 1e-10);
  }
}

TEST(Theorem2, WorstCaseAtPsiPointEight) {
  // Z1, Z2 of equal norm at angle arccos(0.8).
  const double psi = 0.8;
  const SquareMatrix z1 = kSz, z2 = psi * kSz + std::sqrt(1 - psi * psi) * kSy;
  const CanonicalFrame f = canonical_frame(z1, z2);
  const SquareMatrix x = f.W.adjoint() * expm(kSy, M_PI) * f.W;
  const Su2Factorization r = factorize_theorem2(f, x);
  EXPECT_NEAR(r.params.euler.beta, M_PI, 1e-12);
  EXPECT_EQ(r.params.m, 3);
  EXPECT_EQ(r.inner_factor_count(), 7);
  EXPECT_EQ(r.inner_factor_count(), lowenthal_order(psi) + 1);
  EXPECT_LT(r.sequence.residual, 1e-10);
}

TEST(Theorem2, IdentityTargetIsEmpty) {
  Rng rng(28);
  const CanonicalFrame f = canonical_frame(rng.su(2), rng.su(2));
  const Su2Factorization r = factorize_theorem2(f, identity(2));
  EXPECT_TRUE(r.sequence.steps.empty());
  EXPECT_FALSE(r.sequence.audit.empty());
  EXPECT_LT(r.sequence.residual, 1e-12);
}

TEST(Theorem2, RejectsBadTargets) {
  const CanonicalFrame f = canonical_frame(2.0 * kSz, kSy);
  EXPECT_THROW(factorize_theorem2(f, identity(3)), std::invalid_argument);
}

TEST(Theorem2Property, ReconstructionAndCounts) {
  Rng rng(29);
  for (int i = 0; i < 1000; ++i) {
    const double ratio = std::array<double, 3>{0.1, 1.0, 10.0}[i % 3];
    const Su2Problem p = random_problem(rng, ratio);
    const CanonicalFrame f = canonical_frame(p.z1(), p.z2());
    const SquareMatrix x = rng.haar_special(2);
    const Su2Factorization r = factorize_theorem2(f, x);
    // Independent product of the audit trail.
    SquareMatrix prod = identity(2);
    for (const auto& s : r.sequence.audit) {
      EXPECT_GE(s.duration, 0.0);
      prod = (series_expm(s.gen == Generator::Z1 ? p.z1() : p.z2(), s.duration) * prod).eval();
    }
    EXPECT_LT(distance(prod, x), 1e-9);
    EXPECT_EQ(static_cast<int>(r.sequence.audit.size()), 3 * r.params.m + 2);
    EXPECT_EQ(merged_factor_count(r.sequence.audit), r.inner_factor_count());
    EXPECT_LE(r.inner_factor_count(), lowenthal_order(psi_of_M(p, p.M)) + 1);
  }
}

TEST(Theorem2Property, WorstCaseEqualityParity) {
  Rng rng(30);
  for (int i = 0; i < 2000; ++i) {
    const double psi = i == 0 ? 0.0 : rng.uniform(0.0, 0.995);
    const int m = admissible_m(M_PI, psi);
    const int s = lowenthal_order(psi);
    const int f = lowenthal_f(psi);
    if (psi == 0.0 || f % 2 == 1) {
      EXPECT_EQ(2 * m + 1, s) << psi;
    } else {
      EXPECT_EQ(2 * m + 1, s + 1) << psi;
    }
  }
}

TEST(Theorem2Property, FrameInvariance) {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const Su2Problem p = random_problem(rng, rng.uniform(0.1, 10));
    const SquareMatrix x = rng.haar_special(2);
    const auto a = factorize_theorem2(canonical_frame(p.z1(), p.z2(), {}, 0.0), x);
    const auto b = factorize_theorem2(canonical_frame(p.z1(), p.z2(), {}, rng.uniform(0.1, 6.0)), x);
    EXPECT_LT(a.sequence.residual, 1e-9);
    EXPECT_LT(b.sequence.residual, 1e-9);
  }
}

TEST(Theorem1, Examples) {
  EXPECT_TRUE(steer_theorem1(kSz, kSy, identity(2)).empty());
  const PulseSchedule s = steer_theorem1(kSz, kSy, expm(kSz + kSy, 0.4));
  ASSERT_EQ(s.segments.size(), 1u);
  EXPECT_EQ(s.segments[0].ux, 1.0);
  EXPECT_NEAR(s.segments[0].dt, 0.4, 1e-12);
  EXPECT_THROW(steer_theorem1(SquareMatrix::Zero(2, 2), kSy, identity(2)), std::invalid_argument);
  EXPECT_THROW(steer_theorem1(kSz, SquareMatrix::Zero(2, 2), identity(2)), std::invalid_argument);
}

TEST(Theorem1, EndToEnd) {
  Rng rng(32);
  for (int i = 0; i < 100; ++i) {
    const SquareMatrix a = i == 0 ? kSz : rng.su(2), b = i == 0 ? kSy : rng.su(2);
    const double k = control_authority(a, b);
    const SquareMatrix x = rng.haar_special(2);
    const PulseSchedule s = steer_theorem1(a, b, x);
    EXPECT_LE(s.segments.size(), 3u);
    for (const auto& seg : s.segments) EXPECT_EQ(std::abs(seg.ux), k);
    EXPECT_LT(distance(propagate(a, b, s), x), 1e-8);
  }
}

TEST(Theorem3, MatchesTheorem1AtControlAuthority) {
  Rng rng(33);
  for (int i = 0; i < 50; ++i) {
    const Su2Problem p = random_problem(rng, 1.0);
    const SquareMatrix x = rng.haar_special(2);
    const PulseSchedule s1 = steer_theorem1(p.A, p.B, x);
    const PulseSchedule s3 = steer_theorem3(p, x);
    ASSERT_EQ(s1.segments.size(), s3.segments.size());
    for (size_t j = 0; j < s1.segments.size(); ++j) {
      EXPECT_NEAR(s1.segments[j].dt, s3.segments[j].dt, 1e-10);
      EXPECT_NEAR(s1.segments[j].ux, s3.segments[j].ux, 1e-12);
    }
  }
}

TEST(Theorem3, FreeEvolutionTargetIsOneSegment) {
  Rng rng(34);
  const Su2Problem p = random_problem(rng, 0.7);
  const CanonicalFrame f = canonical_frame(p.z1(), p.z2());
  const double tau = 0.9 * M_PI / f.lambda1;
  const PulseSchedule s = steer_theorem3(p, expm(p.z1(), tau));
  ASSERT_EQ(s.segments.size(), 1u);
  EXPECT_EQ(s.segments[0].ux, p.M);
  EXPECT_NEAR(s.segments[0].dt, tau, 1e-10);
}

TEST(Theorem3Property, BangBangEndToEnd) {
  Rng rng(35);
  for (int i = 0; i < 300; ++i) {
    const Su2Problem p = random_problem(rng, i % 2 ? 0.3 : rng.uniform(0.05, 20));
    const SquareMatrix x = rng.haar_special(2);
    const PulseSchedule s = steer_theorem3(p, x);
    for (const auto& seg : s.segments) {
      EXPECT_EQ(std::abs(seg.ux), p.M);
      EXPECT_EQ(seg.uy, 0.0);
      EXPECT_GE(seg.dt, 0.0);
    }
    EXPECT_LT(distance(propagate(p.A, p.B, s), x), 1e-8);
  }
}

TEST(Proportional, ReachesSubgroupTargets) {
  Rng rng(36);
  for (double ratio : {0.0, 0.5, -3.0, 2.0}) {
    const SquareMatrix b = rng.su(2);
    const Su2Problem p{ratio * b, b, 1.0};
    EXPECT_TRUE(p.proportional());
    for (double s : {0.3, 2.0, 5.5}) {
      const SquareMatrix x = expm(b, s);
      const PulseSchedule sch = steer_theorem3(p, x);
      EXPECT_LE(sch.segments.size(), 1u);
      for (const auto& seg : sch.segments) {
        EXPECT_EQ(std::abs(seg.ux), p.M);
        EXPECT_GE(seg.dt, 0.0);
      }
      EXPECT_LT(distance(propagate(p.A, p.B, sch), x), 1e-9);
    }
    EXPECT_THROW(steer_theorem3(p, expm(rng.su(2), 1.0)), std::domain_error);
  }
}

TEST(Padding, EndpointUnchangedAndExactTime) {
  Rng rng(37);
  for (int i = 0; i < 50; ++i) {
    const Su2Problem p = random_problem(rng, rng.uniform(0.2, 5));
    const SquareMatrix x = i % 5 == 0 ? identity(2) : rng.haar_special(2);
    const PulseSchedule s = steer_theorem3(p, x);
    const double minimum = s.total_time() + padding_budget(p).minimum();
    for (double extra : {0.0, 5.0}) {
      const PulseSchedule padded = pad_to_time(p, s, minimum + extra);
      EXPECT_NEAR(padded.total_time(), minimum + extra, 1e-9);
      EXPECT_LT(distance(propagate(p.A, p.B, padded), x), 1e-8);
      for (const auto& seg : padded.segments) {
        EXPECT_EQ(std::abs(seg.ux), p.M);
        EXPECT_GE(seg.dt, 0.0);
      }
    }
    EXPECT_THROW(pad_to_time(p, s, minimum - 0.1), std::domain_error);
  }
}

TEST(Problem, Validation) {
  EXPECT_THROW((Su2Problem{kSz, kSy, -1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((Su2Problem{kSz, SquareMatrix::Zero(2, 2), 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((Su2Problem{pauli::sz(), kSy, 1.0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((Su2Problem{kSz, kSy, 1.0}.validate()));
}

}  // namespace
}  // namespace spinsteer::su2

#include "spinsteer/so3_decomp.h"

#include <array>
#include <cmath>
#include <stdexcept>

namespace spinsteer::so3 {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

Eigen::Matrix3d real3(const SquareMatrix& x, const char* what, double tol) {
  if (x.rows() != 3 || x.cols() != 3) throw std::invalid_argument(std::string(what) + " must be 3x3");
  if (x.imag().norm() > tol) throw std::invalid_argument(std::string(what) + " must be real");
  return x.real();
}

void require_so3_algebra(const Eigen::Matrix3d& z, const char* what, double tol) {
  if ((z + z.transpose()).norm() > tol * std::max(1.0, z.norm())) {
    throw std::invalid_argument(std::string(what) + " must be skew-symmetric");
  }
}

SquareMatrix rot12(double t) { return expm(so_basis(3, 1, 2), t); }

}  // namespace

double So3Pair::psi() const { return rho / std::sqrt(1.0 + rho * rho); }

SquareMatrix So3Pair::normalized_z1() const { return so_basis(3, 1, 2); }

SquareMatrix So3Pair::normalized_z2() const { return rho * so_basis(3, 1, 2) + so_basis(3, 2, 3); }

So3Pair canonicalize_so3(const SquareMatrix& z1, const SquareMatrix& z2,
                         const NumericPolicy& policy) {
  const Eigen::Matrix3d a = real3(z1, "Z1", policy.rank_tol);
  const Eigen::Matrix3d b = real3(z2, "Z2", policy.rank_tol);
  require_so3_algebra(a, "Z1", policy.rank_tol);
  require_so3_algebra(b, "Z2", policy.rank_tol);

  const Eigen::Vector3d axis(a(1, 2), -a(0, 2), a(0, 1));
  const double lambda1 = axis.norm();
  if (lambda1 <= policy.zero_tol) throw std::invalid_argument("canonicalize_so3: Z1 = 0");

  Eigen::Vector3d v3 = axis / lambda1;
  Eigen::Vector3d seed = Eigen::Vector3d::Unit(0);
  int smallest = 0;
  v3.cwiseAbs().minCoeff(&smallest);
  seed = Eigen::Vector3d::Unit(smallest);
  Eigen::Vector3d v1 = (seed - seed.dot(v3) * v3).normalized();
  Eigen::Vector3d v2 = v3.cross(v1);
  if (v1.dot(a * v2) < 0) {
    v3 = -v3;
    std::swap(v1, v2);
  }
  Eigen::Matrix3d t1;
  t1.row(0) = v1.transpose();
  t1.row(1) = v2.transpose();
  t1.row(2) = v3.transpose();

  const Eigen::Matrix3d m = t1 * b * t1.transpose();
  const double cb = m(0, 2);  // S13 weight
  const double cc = m(1, 2);  // S23 weight
  const double r = std::hypot(cb, cc);
  if (r <= policy.rank_tol * std::max(1.0, b.norm())) {
    throw std::domain_error("canonicalize_so3: Z2 is parallel to Z1");
  }

  // Of the rotations e^{S12 theta} that cancel the S13 weight, keep the one
  // leaving a positive S23 weight.
  const std::array<std::array<double, 2>, 4> candidates{
      {{cc / r, -cb / r}, {cc / r, cb / r}, {-cc / r, cb / r}, {-cc / r, -cb / r}}};
  Eigen::Matrix3d t2 = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d best_m;
  bool found = false;
  for (const auto& [ct, st] : candidates) {
    Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
    rot(0, 0) = ct;
    rot(0, 1) = st;
    rot(1, 0) = -st;
    rot(1, 1) = ct;
    const Eigen::Matrix3d mm = rot * m * rot.transpose();
    if (std::abs(mm(0, 2)) <= 1e-12 * r && mm(1, 2) > 0) {
      t2 = rot;
      best_m = mm;
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("canonicalize_so3: no rotation clears the S13 weight");

  So3Pair pair;
  pair.Z1 = z1;
  pair.Z2 = z2;
  pair.T_canon = (t2 * t1).cast<cplx>();
  pair.scale1 = lambda1;
  pair.scale2 = best_m(1, 2);
  pair.rho = best_m(0, 1) / pair.scale2;
  return pair;
}

SquareMatrix exp_z2_entries(double rho, double t2) {
  const double eta2 = 1.0 + rho * rho;
  const double eta = std::sqrt(eta2);
  const double s = std::sin(eta * t2);
  const double c = std::cos(eta * t2);
  Eigen::Matrix3d x;
  x << (1 + rho * rho * c) / eta2, rho * s / eta, (rho - rho * c) / eta2,
       -s * rho / eta, c, s / eta,
       (rho - c * rho) / eta2, -s / eta, (c + rho * rho) / eta2;
  return x.cast<cplx>();
}

int admissible_m_so3(double beta, double psi) {
  if (psi * psi >= 1.0) throw std::domain_error("admissible_m_so3: |psi| must be < 1");
  const double bound = 2.0 * psi * psi - 1.0;
  int m = 1;
  while (bound > std::cos(beta / m)) ++m;
  return m;
}

FactorSequence factor_small_rotation(const So3Pair& pair, double beta_over_m,
                                     const NumericPolicy& policy) {
  const double psi = pair.psi();
  if (2.0 * psi * psi - 1.0 > std::cos(beta_over_m) + policy.zero_tol) {
    throw std::domain_error("factor_small_rotation: rotation angle not admissible for this pair");
  }
  const double eta = std::sqrt(1.0 + pair.rho * pair.rho);
  const double sh = std::min(1.0, eta * std::abs(std::sin(beta_over_m / 2.0)));
  const double t2 = 2.0 * std::atan2(sh, std::sqrt(std::max(0.0, 1.0 - sh * sh))) / eta;

  const Eigen::Matrix3d z2t = exp_z2_entries(pair.rho, t2).real();
  const double t1 = wrap2pi(std::atan2(-z2t(0, 2), z2t(1, 2)));
  const Eigen::Matrix3d partial = rot12(t1).real() * z2t;
  const double t3 = wrap2pi(std::atan2(-partial(0, 1), partial(0, 0)));

  FactorSequence seq;
  seq.generators[Generator::Z1] = pair.normalized_z1();
  seq.generators[Generator::Z2] = pair.normalized_z2();
  seq.audit = {{Generator::Z1, t3}, {Generator::Z2, t2}, {Generator::Z1, t1}};
  seq.steps = seq.audit;
  seq.residual = distance(seq.product(), expm(so_basis(3, 2, 3), beta_over_m));
  return seq;
}

SquareMatrix So3Euler::matrix() const {
  return rot12(alpha) * expm(so_basis(3, 2, 3), beta) * rot12(gamma);
}

So3Euler so3_euler_extract(const SquareMatrix& x, const NumericPolicy& policy) {
  const Eigen::Matrix3d r = real3(x, "rotation", policy.rank_tol);
  So3Euler e;
  const double side = std::hypot(r(0, 2), r(1, 2));
  if (side <= policy.zero_tol && r(2, 2) > 0) {
    e.alpha = wrap2pi(std::atan2(r(0, 1), r(0, 0)));
  } else if (side <= policy.zero_tol) {
    e.beta = M_PI;
    e.alpha = wrap2pi(std::atan2(-r(0, 1), r(0, 0)));
  } else {
    e.beta = std::atan2(side, r(2, 2));
    e.alpha = wrap2pi(std::atan2(r(0, 2), r(1, 2)));
    e.gamma = wrap2pi(std::atan2(r(2, 0), -r(2, 1)));
  }
  return e;
}

So3Factorization factorize_so3(const So3Pair& pair, const SquareMatrix& x_f,
                               const NumericPolicy& policy) {
  const Eigen::Matrix3d xr = real3(x_f, "target", policy.rank_tol);
  if ((xr * xr.transpose() - Eigen::Matrix3d::Identity()).norm() > policy.rank_tol ||
      std::abs(xr.determinant() - 1.0) > policy.rank_tol) {
    throw std::invalid_argument("factorize_so3: target is not in SO(3)");
  }

  So3Factorization out;
  const SquareMatrix y = pair.T_canon * x_f * pair.T_canon.transpose();
  out.euler = so3_euler_extract(y, policy);
  out.m = admissible_m_so3(out.euler.beta, pair.psi());

  std::vector<FactorStep> raw;
  raw.push_back({Generator::Z1, out.euler.gamma});
  if (out.euler.beta > 0.0) {
    const FactorSequence block = factor_small_rotation(pair, out.euler.beta / out.m, policy);
    for (int i = 0; i < out.m; ++i) raw.insert(raw.end(), block.steps.begin(), block.steps.end());
  }
  raw.push_back({Generator::Z1, out.euler.alpha});

  // Merge neighbouring Z1 factors; e^{S12 t} has period 2 pi.
  std::vector<FactorStep> merged;
  for (const auto& s : raw) {
    if (!merged.empty() && merged.back().gen == s.gen) {
      merged.back().duration += s.duration;
    } else {
      merged.push_back(s);
    }
  }
  for (auto& s : merged) {
    if (s.gen == Generator::Z1) {
      s.duration = wrap2pi(s.duration);
      if (kTwoPi - s.duration <= policy.zero_tol) s.duration = 0.0;
    }
  }

  out.normalized.generators[Generator::Z1] = pair.normalized_z1();
  out.normalized.generators[Generator::Z2] = pair.normalized_z2();
  out.normalized.audit = merged;
  out.normalized.steps = prune_zero_steps(merged, policy.zero_tol);
  out.normalized.residual = distance(out.normalized.product(), y);

  out.sequence.generators[Generator::Z1] = pair.Z1;
  out.sequence.generators[Generator::Z2] = pair.Z2;
  for (const auto& s : out.normalized.audit) {
    const double scale = s.gen == Generator::Z1 ? pair.scale1 : pair.scale2;
    out.sequence.audit.push_back({s.gen, s.duration / scale});
  }
  out.sequence.steps = prune_zero_steps(out.sequence.audit, policy.zero_tol);
  out.sequence.residual = distance(out.sequence.product(), x_f);
  return out;
}

}  // namespace spinsteer::so3

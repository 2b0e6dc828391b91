#include "spinsteer/twospin.h"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace spinsteer::twospin {
namespace {

SquareMatrix ss(const SquareMatrix& a, const SquareMatrix& b) { return kron(a, b); }

SquareMatrix one() { return identity(2); }

const SquareMatrix& footnote_matrix() {
  static const SquareMatrix t = [] {
    SquareMatrix m(4, 4);
    const cplx o{0, 0}, i{0, 1}, r{1, 0};
    m << o, i, -i, o,
         o, r, r, o,
         -i, o, o, -i,
         -r, o, o, r;
    return SquareMatrix(m / std::sqrt(2.0));
  }();
  return t;
}

void verify_footnote_matrix() {
  static std::once_flag once;
  std::call_once(once, [] {
    const SquareMatrix& t = footnote_matrix();
    if (!is_unitary(t, 1e-11)) throw std::logic_error("coordinate change T is not unitary");
    // J = 4 gives D = -i sum S_k (x) S_k * 4.
    SquareMatrix d = SquareMatrix::Zero(4, 4);
    d += ss(pauli::sx(), pauli::sx()) + ss(pauli::sy(), pauli::sy()) + ss(pauli::sz(), pauli::sz());
    d *= -kI * 4.0;
    SquareMatrix expect = SquareMatrix::Zero(4, 4);
    expect.diagonal() << -3.0, 1.0, 1.0, 1.0;
    expect *= -kI;
    if (distance(t * d * t.adjoint(), expect) > 1e-11) {
      throw std::logic_error("coordinate change T does not diagonalize D");
    }
  });
}

double max_residual(const LieBasis& target, const LieBasis& left, const LieBasis& right) {
  double worst = 0.0;
  for (const auto& x : left.elements)
    for (const auto& y : right.elements) worst = std::max(worst, target.residual(commutator(x, y)));
  return worst;
}

}  // namespace

SpinParams SpinParams::ising(double gamma1, double gamma2, double J, double uz_bar, double M) {
  SpinParams p;
  p.gamma1 = gamma1;
  p.gamma2 = gamma2;
  p.J = J;
  p.uz_bar = uz_bar;
  p.M = M;
  p.abc = {0.0, 0.0, J};
  return p;
}

SpinSystem build_system(const SpinParams& params) {
  if (params.J == 0.0) throw std::invalid_argument("build_system: J must be nonzero");
  const SquareMatrix sx = pauli::sx(), sy = pauli::sy(), sz = pauli::sz();
  const SquareMatrix xx = ss(sx, sx), yy = ss(sy, sy), zz = ss(sz, sz);

  SpinSystem s;
  s.params = params;
  const auto& [a, b, c] = params.abc;
  s.A = -kI * (a * xx + b * yy + c * zz);
  const auto control = [&](const SquareMatrix& op) {
    return SquareMatrix(-kI * (params.gamma1 * ss(op, one()) + params.gamma2 * ss(one(), op)));
  };
  s.Bx = control(sx);
  s.By = control(sy);
  s.Bz = control(sz);
  const double J = params.J;
  s.D = -kI * J * (xx + yy + zz);
  s.A1 = -kI * (J / 3.0) * (2.0 * zz - xx - yy);
  s.A2 = -kI * (J / 3.0) * (2.0 * yy - xx - zz);
  s.A3 = -kI * (J / 3.0) * (2.0 * xx - zz - yy);
  return s;
}

bool SpinSystem::homonuclear(const NumericPolicy& policy) const {
  const double scale = std::max({1.0, std::abs(params.gamma1), std::abs(params.gamma2)});
  return std::abs(params.gamma1 - params.gamma2) <= policy.rank_tol * scale;
}

bool SpinSystem::ising(const NumericPolicy& policy) const {
  const double scale = std::max(1.0, std::abs(params.J));
  return std::abs(params.abc[0]) <= policy.rank_tol * scale &&
         std::abs(params.abc[1]) <= policy.rank_tol * scale &&
         std::abs(params.abc[2] - params.J) <= policy.rank_tol * scale;
}

SquareMatrix SpinSystem::drift() const { return A + Bz * params.uz_bar; }

CoordinateChange CoordinateChange::make(Direction direction) {
  verify_footnote_matrix();
  CoordinateChange c;
  c.direction = direction;
  c.T = direction == Direction::to_diag ? footnote_matrix() : SquareMatrix(footnote_matrix().adjoint());
  return c;
}

SquareMatrix CoordinateChange::apply(const SquareMatrix& x) const {
  if (x.rows() != 4 || x.cols() != 4) throw std::invalid_argument("coordinate change needs 4x4 input");
  return T * x * T.adjoint();
}

CoordinateChange CoordinateChange::inverse() const {
  return make(direction == Direction::to_diag ? Direction::to_lab : Direction::to_diag);
}

SquareMatrix to_diag(const SquareMatrix& x) { return CoordinateChange::make().apply(x); }

SquareMatrix to_lab(const SquareMatrix& x) {
  return CoordinateChange::make(CoordinateChange::Direction::to_lab).apply(x);
}

std::string to_string(ControllabilityClass c) {
  switch (c) {
    case ControllabilityClass::SU4_full: return "SU4_full";
    case ControllabilityClass::U3_homonuclear: return "U3_homonuclear";
    case ControllabilityClass::U2_isotropic: return "U2_isotropic";
    case ControllabilityClass::Other: return "Other";
  }
  return "Other";
}

Controllability classify_controllability(const SpinSystem& sys, const NumericPolicy& policy) {
  const std::vector<SquareMatrix> gens{sys.drift(), sys.Bx, sys.By};
  Controllability out;
  out.dim = lie_closure(gens, policy).dim();
  switch (out.dim) {
    case 15: out.cls = ControllabilityClass::SU4_full; break;
    case 9: out.cls = ControllabilityClass::U3_homonuclear; break;
    case 4: out.cls = ControllabilityClass::U2_isotropic; break;
    default: out.cls = ControllabilityClass::Other; break;
  }
  return out;
}

CartanSplit cartan_split(const SpinSystem& sys, const NumericPolicy& policy) {
  if (!sys.homonuclear(policy) || !sys.ising(policy)) {
    throw std::invalid_argument("cartan_split: needs a homonuclear Ising system");
  }
  CartanSplit out;
  const std::vector<SquareMatrix> k_gens{sys.Bx, sys.By, sys.Bz};
  out.K = lie_closure(k_gens, policy);

  out.P.try_add(sys.A1, policy);
  for (std::size_t i = 0; i < out.P.elements.size(); ++i) {
    const SquareMatrix p = out.P.elements[i];
    for (const auto& k : out.K.elements) out.P.try_add(commutator(k, p), policy);
  }

  out.kk_residual = max_residual(out.K, out.K, out.K);
  out.kp_residual = max_residual(out.P, out.K, out.P);
  out.pp_residual = max_residual(out.K, out.P, out.P);
  return out;
}

bool is_su2_squared(const SquareMatrix& k, double tol, SquareMatrix* factor) {
  if (k.rows() != 4 || k.cols() != 4) return false;
  // K_{(i,p),(j,q)} = L_ij L_pq; the diagonal blocks K_{(i,.),(i,.)} = L_ii L.
  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double n = k.block(2 * i, 2 * j, 2, 2).norm();
      if (n > best) {
        best = n;
        bi = i;
        bj = j;
      }
    }
  if (best <= tol) return false;
  const SquareMatrix block = k.block(2 * bi, 2 * bj, 2, 2);
  // block = L_{bi,bj} L, so block(bi,bj) = L_{bi,bj}^2.
  const cplx lij = std::sqrt(block(bi, bj));
  if (std::abs(lij) <= tol) return false;
  const SquareMatrix l = block / lij;
  if (distance(kron(l, l), k) > tol) return false;
  if (!is_unitary(l, tol)) return false;
  // L is fixed up to sign, which leaves det L unchanged; det L = -1 means
  // K = -(L' (x) L') with L' in SU(2), outside the group.
  if (std::abs(l.determinant() - 1.0) > tol) return false;
  if (factor) *factor = l;
  return true;
}

SquareMatrix kak_element(const SpinSystem& sys, const SquareMatrix& k1, const SquareMatrix& k2,
                         const std::array<double, 3>& alphas, double T,
                         const NumericPolicy& policy) {
  for (double a : alphas) {
    if (a < 0.0) throw std::invalid_argument("kak_element: alphas must be nonnegative");
  }
  const double sum = alphas[0] + alphas[1] + alphas[2];
  if (std::abs(sum - T) > policy.identity_tol * std::max(1.0, std::abs(T))) {
    throw std::invalid_argument("kak_element: alphas must sum to T");
  }
  if (!is_su2_squared(k1, 1e-10) || !is_su2_squared(k2, 1e-10)) {
    throw std::invalid_argument("kak_element: K factors must have the form L (x) L");
  }
  const SquareMatrix core = alphas[0] * sys.A1 + alphas[1] * sys.A2 + alphas[2] * sys.A3;
  return expm(sys.D, T / 3.0) * k1 * expm(core, 1.0) * k2;
}

double large_time_threshold(const SpinSystem& sys) { return 36.0 * M_PI / std::abs(sys.params.J); }

bool has_block_form(const SquareMatrix& y, double tol) {
  if (y.rows() != 4 || y.cols() != 4) return false;
  if (std::abs(y(0, 0) - 1.0) > tol) return false;
  for (int j = 1; j < 4; ++j) {
    if (std::abs(y(0, j)) > tol || std::abs(y(j, 0)) > tol) return false;
  }
  const SquareMatrix g = y.block(1, 1, 3, 3);
  return is_unitary(g, tol) && std::abs(g.determinant() - 1.0) <= tol;
}

bool member_large_time(const SpinSystem& sys, const SquareMatrix& x_f, double T, Basis basis,
                       double tol) {
  if (x_f.rows() != 4 || x_f.cols() != 4) throw std::invalid_argument("member_large_time: 4x4 target");
  const double threshold = large_time_threshold(sys);
  if (T < threshold * (1.0 - 1e-12)) {
    throw std::domain_error("member_large_time: T is below 36 pi / |J|");
  }
  const SquareMatrix lab = basis == Basis::lab ? x_f : to_lab(x_f);
  const SquareMatrix y = to_diag(expm(sys.D, -T / 3.0) * lab);
  return has_block_form(y, tol);
}

}  // namespace spinsteer::twospin

#include "spinsteer/mat_core.h"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace spinsteer {

namespace {

double scale_of(const SquareMatrix& a) { return std::max(1.0, a.norm()); }

template <int N>
SquareMatrix expm_hermitian_fixed(const SquareMatrix& a, double t) {
  using Mat = Eigen::Matrix<cplx, N, N>;
  // A = -iH with H Hermitian, so e^{At} = V diag(e^{-i h t}) V*.
  Mat h = kI * a;
  h = (0.5 * (h + h.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Mat& v = es.eigenvectors();
  Eigen::Matrix<cplx, N, 1> phases;
  for (int i = 0; i < N; ++i) phases(i) = std::exp(-kI * (es.eigenvalues()(i) * t));
  return v * phases.asDiagonal() * v.adjoint();
}

SquareMatrix expm_hermitian_dynamic(const SquareMatrix& a, double t) {
  SquareMatrix h = kI * a;
  h = (0.5 * (h + h.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<SquareMatrix> es(h);
  const SquareMatrix& v = es.eigenvectors();
  Eigen::VectorXcd phases(a.rows());
  for (int i = 0; i < a.rows(); ++i) phases(i) = std::exp(-kI * (es.eigenvalues()(i) * t));
  return v * phases.asDiagonal() * v.adjoint();
}

SquareMatrix expm_skew_hermitian(const SquareMatrix& a, double t) {
  switch (a.rows()) {
    case 2: return expm_hermitian_fixed<2>(a, t);
    case 3: return expm_hermitian_fixed<3>(a, t);
    case 4: return expm_hermitian_fixed<4>(a, t);
    default: return expm_hermitian_dynamic(a, t);
  }
}

SquareMatrix expm_normal(const SquareMatrix& a, double t) {
  const double s = scale_of(a);
  if ((a * a.adjoint() - a.adjoint() * a).norm() > 1e-10 * s * s) {
    throw std::invalid_argument("expm: input matrix is not normal");
  }
  // The Schur form of a normal matrix is diagonal.
  Eigen::ComplexSchur<SquareMatrix> schur(a);
  const SquareMatrix& q = schur.matrixU();
  const SquareMatrix& tri = schur.matrixT();
  Eigen::VectorXcd phases(a.rows());
  for (int i = 0; i < a.rows(); ++i) phases(i) = std::exp(tri(i, i) * t);
  return q * phases.asDiagonal() * q.adjoint();
}

void require_square(const SquareMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

}  // namespace

SquareMatrix identity(int dim) { return SquareMatrix::Identity(dim, dim); }

bool is_unitary(const SquareMatrix& x, double tol) {
  return x.rows() == x.cols() && (x * x.adjoint() - identity(x.rows())).norm() < tol;
}

bool is_special(const SquareMatrix& x, double tol) {
  return x.rows() == x.cols() && std::abs(x.determinant() - 1.0) < tol;
}

bool is_skew_hermitian(const SquareMatrix& x, double tol) {
  return x.rows() == x.cols() && (x + x.adjoint()).norm() < tol;
}

bool is_real_orthogonal(const SquareMatrix& x, double tol) {
  return x.imag().norm() < tol && is_unitary(x, tol);
}

double distance(const SquareMatrix& x, const SquareMatrix& y) { return (x - y).norm(); }

cplx inner_product(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  return (a * b.adjoint()).trace();
}

double real_inner(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("real_inner: dimension mismatch");
  }
  return (a.array() * b.array().conjugate()).real().sum();
}

SquareMatrix commutator(const SquareMatrix& a, const SquareMatrix& b) { return a * b - b * a; }

SquareMatrix expm(const SquareMatrix& a, double t) {
  require_square(a, "expm");
  if (t == 0.0) return identity(a.rows());
  if (is_skew_hermitian(a, 1e-10 * scale_of(a))) {
    if (a.rows() == 2) return expm_su2(a, t);
    return expm_skew_hermitian(a, t);
  }
  return expm_normal(a, t);
}

SquareMatrix expm_diagonalize(const SquareMatrix& a, double t) {
  require_square(a, "expm_diagonalize");
  if (is_skew_hermitian(a, 1e-10 * scale_of(a))) return expm_skew_hermitian(a, t);
  return expm_normal(a, t);
}

SquareMatrix expm_su2(const SquareMatrix& a, double t) {
  if (a.rows() != 2 || a.cols() != 2) throw std::invalid_argument("expm_su2: expects 2x2");
  const cplx half_trace = 0.5 * a.trace();
  const SquareMatrix a0 = a - half_trace * identity(2);
  // a0^2 = -w^2 I for traceless skew-Hermitian a0.
  const double w = std::sqrt(std::max(0.0, std::norm(a0(0, 0)) + std::norm(a0(0, 1))));
  const double wt = w * t;
  const double sinc = (std::abs(wt) < 1e-8) ? t * (1.0 - wt * wt / 6.0) : std::sin(wt) / w;
  SquareMatrix out = std::cos(wt) * identity(2) + sinc * a0;
  return std::exp(half_trace * t) * out;
}

Su2Log logm_su2(const SquareMatrix& x, const NumericPolicy& policy) {
  if (x.rows() != 2 || x.cols() != 2) throw std::invalid_argument("logm_su2: expects 2x2");
  // X = c I - i (v . sigma), |v| = sin(half), c = cos(half), angle = 2 half.
  const double c = 0.5 * (x(0, 0) + x(1, 1)).real();
  const double v1 = -0.5 * (x(0, 1) + x(1, 0)).imag();
  const double v2 = 0.5 * (x(1, 0) - x(0, 1)).real();
  const double v3 = 0.5 * (x(1, 1) - x(0, 0)).imag();
  const double vn = std::sqrt(v1 * v1 + v2 * v2 + v3 * v3);
  const double half = std::atan2(vn, c);

  Su2Log out;
  if ((x + identity(2)).norm() <= policy.zero_tol) {
    out.degenerate = true;
    out.log = -kI * (2.0 * M_PI) * pauli::sz();
    return out;
  }
  if (vn == 0.0) {
    out.log = SquareMatrix::Zero(2, 2);
    return out;
  }
  const double f = 2.0 * half / vn;
  out.log = -kI * f * (v1 * pauli::sx() + v2 * pauli::sy() + v3 * pauli::sz());
  return out;
}

SquareMatrix kron(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw std::invalid_argument("kron: only 2x2 factors are supported");
  }
  SquareMatrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
  return out;
}

SquareMatrix LieBasis::project(const SquareMatrix& x) const {
  SquareMatrix p = SquareMatrix::Zero(x.rows(), x.cols());
  for (const auto& e : elements) p += real_inner(x, e) * e;
  return p;
}

double LieBasis::residual(const SquareMatrix& x) const {
  SquareMatrix r = x;
  // Two passes of modified Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : elements) r -= real_inner(r, e) * e;
  return std::sqrt(std::max(0.0, real_inner(r, r)));
}

bool LieBasis::try_add(const SquareMatrix& x, const NumericPolicy& policy) {
  const double xn = std::sqrt(std::max(0.0, real_inner(x, x)));
  if (xn < policy.zero_tol) return false;
  if (!elements.empty() && (elements.front().rows() != x.rows())) {
    throw std::invalid_argument("LieBasis: dimension mismatch");
  }
  SquareMatrix r = x;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : elements) r -= real_inner(r, e) * e;
  const double rn = std::sqrt(std::max(0.0, real_inner(r, r)));
  if (rn <= policy.rank_tol * xn) return false;
  elements.push_back(r / rn);
  return true;
}

LieBasis linear_span(std::span<const SquareMatrix> elements, const NumericPolicy& policy) {
  LieBasis basis;
  for (const auto& e : elements) {
    const double n = std::sqrt(std::max(0.0, real_inner(e, e)));
    if (n > 0.0) basis.try_add(e / n, policy);
  }
  return basis;
}

LieBasis lie_closure(std::span<const SquareMatrix> generators, const NumericPolicy& policy) {
  if (generators.empty()) throw std::invalid_argument("lie_closure: empty generator list");
  const int dim = static_cast<int>(generators.front().rows());
  for (const auto& g : generators) {
    if (g.rows() != dim || g.cols() != dim) {
      throw std::invalid_argument("lie_closure: generators must share one dimension");
    }
    if (!is_skew_hermitian(g, 1e-10 * scale_of(g))) {
      throw std::invalid_argument("lie_closure: generators must be skew-Hermitian");
    }
  }
  LieBasis basis = linear_span(generators, policy);
  for (std::size_t i = 0; i < basis.elements.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      // Copy: try_add may reallocate the element vector.
      const SquareMatrix bracket = commutator(basis.elements[i], basis.elements[j]);
      basis.try_add(bracket, policy);
    }
  }
  return basis;
}

namespace pauli {
SquareMatrix sx() {
  SquareMatrix m(2, 2);
  m << 0.0, 0.5, 0.5, 0.0;
  return m;
}
SquareMatrix sy() {
  SquareMatrix m(2, 2);
  m << 0.0, -0.5 * kI, 0.5 * kI, 0.0;
  return m;
}
SquareMatrix sz() {
  SquareMatrix m(2, 2);
  m << 0.5, 0.0, 0.0, -0.5;
  return m;
}
}  // namespace pauli

SquareMatrix so_basis(int dim, int h, int k) {
  if (h < 1 || k < 1 || h > dim || k > dim || h == k) {
    throw std::invalid_argument("so_basis: invalid index pair");
  }
  SquareMatrix m = SquareMatrix::Zero(dim, dim);
  m(h - 1, k - 1) = 1.0;
  m(k - 1, h - 1) = -1.0;
  return m;
}

}  // namespace spinsteer

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinsteer/numeric_policy.h"

namespace spinsteer {

using cplx = std::complex<double>;

// Dense complex n x n matrix, n in {2, 3, 4}. Carries both group elements
// (unitaries) and Lie-algebra elements (skew-Hermitian matrices).
using SquareMatrix = Eigen::MatrixXcd;

inline constexpr cplx kI{0.0, 1.0};

SquareMatrix identity(int dim);

// Predicates. Tolerances are absolute on the Frobenius norm.
bool is_unitary(const SquareMatrix& x, double tol);
bool is_special(const SquareMatrix& x, double tol);
bool is_skew_hermitian(const SquareMatrix& x, double tol);
bool is_real_orthogonal(const SquareMatrix& x, double tol);

// Frobenius norm of x - y.
double distance(const SquareMatrix& x, const SquareMatrix& y);

// <A, B> := Tr(A B*). Real when both arguments are skew-Hermitian.
cplx inner_product(const SquareMatrix& a, const SquareMatrix& b);

// Real part of the trace inner product; the metric used on real Lie algebras.
double real_inner(const SquareMatrix& a, const SquareMatrix& b);

SquareMatrix commutator(const SquareMatrix& a, const SquareMatrix& b);

// e^{A t} for normal A. Skew-Hermitian input goes through a Hermitian
// eigendecomposition (2x2 through the closed form below), so the result is
// unitary to rounding even for long durations. Non-normal input throws
// std::invalid_argument.
SquareMatrix expm(const SquareMatrix& a, double t);

// e^{A t} through the unitary eigendecomposition path only, for any dim.
SquareMatrix expm_diagonalize(const SquareMatrix& a, double t);

// Closed-form e^{A t} for a 2x2 skew-Hermitian A (axis-angle form).
SquareMatrix expm_su2(const SquareMatrix& a, double t);

struct Su2Log {
  SquareMatrix log;
  // Set when X = -I: every axis is a valid logarithm; +z was returned.
  bool degenerate = false;
};

// Principal logarithm of X in SU(2): skew-Hermitian L with e^L = X and
// eigenvalue magnitudes <= pi.
Su2Log logm_su2(const SquareMatrix& x, const NumericPolicy& policy = {});

// Kronecker product of two 2x2 matrices; the first factor is the slow index,
// so the basis order is |++>, |+->, |-+>, |-->.
SquareMatrix kron(const SquareMatrix& a, const SquareMatrix& b);

// Orthonormal (under real_inner) basis of a real subspace of matrices.
struct LieBasis {
  std::vector<SquareMatrix> elements;

  int dim() const { return static_cast<int>(elements.size()); }
  // Norm of the component of x orthogonal to the span.
  double residual(const SquareMatrix& x) const;
  SquareMatrix project(const SquareMatrix& x) const;
  // Gram-Schmidt step: appends the normalized residual of x when it exceeds
  // rank_tol times the norm of x (and x itself is not negligible).
  bool try_add(const SquareMatrix& x, const NumericPolicy& policy = {});
};

// Real Lie algebra generated by the given skew-Hermitian matrices: repeated
// brackets plus Gram-Schmidt until the dimension stabilizes.
LieBasis lie_closure(std::span<const SquareMatrix> generators,
                     const NumericPolicy& policy = {});

// Plain linear span (no brackets).
LieBasis linear_span(std::span<const SquareMatrix> elements,
                     const NumericPolicy& policy = {});

namespace pauli {
// Spin-1/2 operators S_k = sigma_k / 2.
SquareMatrix sx();
SquareMatrix sy();
SquareMatrix sz();
}  // namespace pauli

// Real antisymmetric basis matrix S_hk of so(n): +1 at (h,k), -1 at (k,h).
// Indices are 1-based as in the usual notation.
SquareMatrix so_basis(int dim, int h, int k);

}  // namespace spinsteer

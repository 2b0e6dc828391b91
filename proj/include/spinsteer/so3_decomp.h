#pragma once

#include "spinsteer/mat_core.h"
#include "spinsteer/schedule.h"

namespace spinsteer::so3 {

// Two so(3) generators brought to the normal form Z1 = S12, Z2 = rho S12 + S23
// by a rotation T and two positive time scales.
struct So3Pair {
  SquareMatrix Z1;       // original generators
  SquareMatrix Z2;
  double rho = 0.0;
  SquareMatrix T_canon;  // T2 T1, in SO(3)
  double scale1 = 1.0;   // lambda1
  double scale2 = 1.0;   // d

  double psi() const;
  SquareMatrix normalized_z1() const;
  SquareMatrix normalized_z2() const;
};

So3Pair canonicalize_so3(const SquareMatrix& z1, const SquareMatrix& z2,
                         const NumericPolicy& policy = {});

// Closed form of e^{(rho S12 + S23) t2}.
SquareMatrix exp_z2_entries(double rho, double t2);

// Smallest m >= 1 with 2 psi^2 - 1 <= cos(beta / m).
int admissible_m_so3(double beta, double psi);

// e^{S23 beta_over_m} = e^{Z1 t1} e^{Z2 t2} e^{Z1 t3} in normalized generators.
// Chronological steps: Z1 t3, Z2 t2, Z1 t1 (zero durations kept).
FactorSequence factor_small_rotation(const So3Pair& pair, double beta_over_m,
                                     const NumericPolicy& policy = {});

// X = e^{S12 alpha} e^{S23 beta} e^{S12 gamma}, alpha, gamma in [0, 2 pi),
// beta in [0, pi]; gamma = 0 when beta is 0 or pi.
struct So3Euler {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  SquareMatrix matrix() const;
};

So3Euler so3_euler_extract(const SquareMatrix& x, const NumericPolicy& policy = {});

struct So3Factorization {
  // Original generators, durations already divided by scale1 / scale2.
  FactorSequence sequence;
  // Same factorization in the normalized generators S12, rho S12 + S23.
  FactorSequence normalized;
  So3Euler euler;
  int m = 1;
};

// x_f is given in the original coordinates of pair.Z1, pair.Z2.
So3Factorization factorize_so3(const So3Pair& pair, const SquareMatrix& x_f,
                               const NumericPolicy& policy = {});

}  // namespace spinsteer::so3

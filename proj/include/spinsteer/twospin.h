#pragma once

#include <array>
#include <string>

#include "spinsteer/mat_core.h"

namespace spinsteer::twospin {

// Coupling A = -i(a S_x(x)S_x + b S_y(x)S_y + c S_z(x)S_z); Ising is (0, 0, J).
struct SpinParams {
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double J = 1.0;
  double uz_bar = 0.0;
  double M = 1.0;
  std::array<double, 3> abc{0.0, 0.0, 1.0};

  static SpinParams ising(double gamma1, double gamma2, double J, double uz_bar, double M);
};

// All matrices in the product basis |++>, |+->, |-+>, |-->.
struct SpinSystem {
  SpinParams params;
  SquareMatrix A;
  SquareMatrix Bx;
  SquareMatrix By;
  SquareMatrix Bz;
  SquareMatrix D;
  SquareMatrix A1;
  SquareMatrix A2;
  SquareMatrix A3;

  bool homonuclear(const NumericPolicy& policy = {}) const;
  bool ising(const NumericPolicy& policy = {}) const;
  // A + B_z uz_bar.
  SquareMatrix drift() const;
};

SpinSystem build_system(const SpinParams& params);

// X -> T X T* with the fixed unitary T that diagonalizes D.
struct CoordinateChange {
  enum class Direction { to_diag, to_lab };

  SquareMatrix T;
  Direction direction = Direction::to_diag;

  // Checks T D T* = -i (J/4) diag(-3, 1, 1, 1) to 1e-11 on first use and
  // throws std::logic_error if the hard-coded matrix fails.
  static CoordinateChange make(Direction direction = Direction::to_diag);

  SquareMatrix apply(const SquareMatrix& x) const;
  CoordinateChange inverse() const;
};

SquareMatrix to_diag(const SquareMatrix& x);
SquareMatrix to_lab(const SquareMatrix& x);

enum class ControllabilityClass { SU4_full, U3_homonuclear, U2_isotropic, Other };

struct Controllability {
  ControllabilityClass cls = ControllabilityClass::Other;
  int dim = 0;
};

std::string to_string(ControllabilityClass c);

// Dimension of the Lie algebra generated by {A + B_z uz_bar, B_x, B_y}.
Controllability classify_controllability(const SpinSystem& sys, const NumericPolicy& policy = {});

struct CartanSplit {
  LieBasis K;
  LieBasis P;
  // Largest residuals of [K,K] off K, [K,P] off P and [P,P] off K.
  double kk_residual = 0.0;
  double kp_residual = 0.0;
  double pp_residual = 0.0;
};

CartanSplit cartan_split(const SpinSystem& sys, const NumericPolicy& policy = {});

// K = L (x) L for some L in SU(2); optionally returns L.
bool is_su2_squared(const SquareMatrix& k, double tol, SquareMatrix* factor = nullptr);

// e^{D T/3} K1 e^{a1 A1 + a2 A2 + a3 A3} K2 with a_j >= 0 summing to T.
SquareMatrix kak_element(const SpinSystem& sys, const SquareMatrix& k1, const SquareMatrix& k2,
                         const std::array<double, 3>& alphas, double T,
                         const NumericPolicy& policy = {});

enum class Basis { lab, diag };

// Minimal T for the large-time description: 36 pi / |J|.
double large_time_threshold(const SpinSystem& sys);

// True iff e^{-D T/3} X_f has the block form diag(1, G), G in SU(3), in the
// D-diagonal coordinates (tolerance 1e-8). Throws when T is below the
// threshold.
bool member_large_time(const SpinSystem& sys, const SquareMatrix& x_f, double T,
                       Basis basis = Basis::lab, double tol = 1e-8);

// Block-form test used above: |Y00 - 1|, off-block entries and the SU(3)
// defect of the lower block all within tol.
bool has_block_form(const SquareMatrix& y, double tol);

}  // namespace spinsteer::twospin

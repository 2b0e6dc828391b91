#pragma once

#include <array>
#include <optional>
#include <vector>

#include "spinsteer/mat_core.h"
#include "spinsteer/pi_duration.h"
#include "spinsteer/schedule.h"
#include "spinsteer/su2_decomp.h"
#include "spinsteer/twospin.h"

namespace spinsteer::synth {

// Computational frame of a homonuclear Ising pair: D-diagonal coordinates,
// time s = (|J|/6) t and controls scaled by c = gamma 6/|J|. Negative J is
// handled by complex conjugation, which maps the |J| system onto the J system
// with identical controls.
struct ScaledFrame {
  double time_scale = 1.0;     // |J| / 6
  double control_scale = 1.0;  // c
  double uz = 0.0;             // c * uz_bar
  double kbar_bound = 0.0;     // |c| * M
  bool conjugate = false;      // J < 0

  static ScaledFrame from(const twospin::SpinSystem& sys);

  // 4x4 scaled matrices in D-diagonal coordinates.
  static SquareMatrix D();
  static SquareMatrix A();
  static SquareMatrix A1();
  static SquareMatrix Bx();
  static SquareMatrix By();
  static SquareMatrix Bz();
};

// Lower 3x3 blocks: A1 = i diag(2,-1,-1), Bx = S12, By = S13, Bz = S23.
namespace block3 {
SquareMatrix A1();
SquareMatrix Bx();
SquareMatrix By();
SquareMatrix Bz();
}  // namespace block3

// Constant S-frame generator A1 + kbar * B over dt; gen is A1 for free
// evolution, Bx or By otherwise.
struct SFrameSegment {
  PiDuration dt;
  Generator gen = Generator::A1;
  double kbar = 0.0;
};

struct SFrameSchedule {
  std::vector<SFrameSegment> segments;

  PiDuration total() const;
  void append(const SFrameSchedule& other);
  // 3x3 propagator, chronological product of e^{(A1 + kbar B) dt}.
  SquareMatrix product() const;
};

// Lab-frame control for one segment that realizes the S-frame generator
// A1 + kbar * B_which exactly, in scaled units:
//   Bx: u_x = kbar cos(uz t), u_y = -kbar sin(uz t)
//   By: u_x = kbar sin(uz t), u_y =  kbar cos(uz t)
// with t absolute scaled time. With uz = 0 the segment is constant.
PulseSegment rotating_frame_controls(double kbar, double uz, Generator which, double t0, double dt);

// The e^{B theta} primitive: the effective su(2) problem A = 3i S_z,
// B = 2i S_y with bound kbar, delivered in time exactly 4 nbar pi.
struct PrimitivePlan {
  double kbar = 0.0;
  int nbar = 1;
  su2::Su2Problem problem;
  double uniform_bound = 0.0;     // bar T_x over theta in [0, 2 pi]
  double t_quarter = 0.0;         // T_x(pi/2)
  double t_three_quarter = 0.0;   // T_x(3 pi/2)
  PulseSchedule quarter;          // steering to e^{B pi/2}
  PulseSchedule three_quarter;    // steering to e^{B 3pi/2}

  // Smallest nbar with 4 nbar pi >= bar T_x + T_x(pi/2) + T_x(3pi/2) unless
  // overridden; an infeasible override throws std::domain_error.
  static PrimitivePlan make(double kbar, std::optional<int> nbar = std::nullopt);
  int minimal_nbar() const;
  PiDuration duration() const { return PiDuration::pi_multiple(4 * nbar); }
};

// Effective 2x2 target e^{B theta} restricted to the active plane.
SquareMatrix plane_rotation(double theta);

SFrameSchedule synth_exp_bx(double theta, const PrimitivePlan& plan);
SFrameSchedule synth_exp_by(double theta, const PrimitivePlan& plan);
// e^{Bz theta} = e^{-Bx pi/2} e^{By theta} e^{Bx pi/2}, time 12 nbar pi.
SFrameSchedule synth_exp_bz(double theta, const PrimitivePlan& plan);

// U_f = D(alpha) U12(t1,s1) U13(t2,s2) U23(t3,s3); thetas in [0, pi/2],
// sigmas in [0, 2 pi), alphas summing to zero.
struct MurnaghanParams {
  std::array<double, 3> thetas{};
  std::array<double, 3> sigmas{};
  std::array<double, 3> alphas{};

  SquareMatrix matrix() const;
};

// U_kl(theta, sigma), 1-based plane (k, l) of a 3x3 identity.
SquareMatrix plane_unitary(int k, int l, double theta, double sigma);
SquareMatrix diag_phases(const std::array<double, 3>& alphas);

MurnaghanParams murnaghan_decompose(const SquareMatrix& u, const NumericPolicy& policy = {});

// U12 = e^{-A1 s} e^{Bx theta} e^{A1 s}, s = ((sigma + pi) mod 2 pi)/3:
// free s, primitive, free 2 pi - s. Total 2 pi + 4 nbar pi.
SFrameSchedule synth_u12(double theta, double sigma, const PrimitivePlan& plan);
SFrameSchedule synth_u13(double theta, double sigma, const PrimitivePlan& plan);
// U23(theta, sigma) = e^{Bx pi/2} U13(theta, sigma - pi) e^{-Bx pi/2}.
// Total 2 pi + 12 nbar pi.
SFrameSchedule synth_u23(double theta, double sigma, const PrimitivePlan& plan);

// D(alpha) = e^{Bx pi/2} e^{A1 t1} e^{-Bx pi/2} e^{A1 t2},
// t1 = (2 a2 + a1)/3, t2 = (2 a1 + a2)/3, both mod 2 pi.
SFrameSchedule synth_diag(const std::array<double, 3>& alphas, const PrimitivePlan& plan);

// Identity in time 3 tau + 16 nbar pi.
SFrameSchedule identity_gadget(const PiDuration& tau, const PrimitivePlan& plan);

// Matrix identities behind the two identity constructions (3x3 products).
SquareMatrix short_identity_product(double tau);  // Ã1 form
SquareMatrix long_identity_product(double tau);   // A1 form with Bx, By

struct TwoSpinTarget {
  double T_f = 0.0;  // scaled time
  SquareMatrix S_f;  // 4x4 block form diag(1, G), D-diagonal coordinates

  // e^{D T_f/3} S_f with the physical D of sys (D-diagonal coordinates).
  SquareMatrix full(const twospin::SpinSystem& sys) const;
};

struct SynthOptions {
  std::optional<int> nbar;
  std::optional<int> n;
};

struct TwoSpinSynthesis {
  ScaledFrame frame;
  PrimitivePlan plan;
  int n = 0;
  MurnaghanParams murnaghan;
  SFrameSchedule s_frame;
  PiDuration scaled_total;       // measured
  PiDuration scaled_target;      // T_f + 4 n pi
  PulseSchedule scaled_controls; // scaled units, D-diagonal coordinates
  PulseSchedule physical;        // physical units
  SquareMatrix target_diag;      // e^{D T_f/3} S_f, D-diagonal coordinates
  SquareMatrix target_lab;

  double physical_time() const;
};

// The scaled D-diagonal system the S-frame construction lives in: drift
// A + Bz uz, controls (Bx, By).
struct ScaledSystem {
  SquareMatrix drift;
  SquareMatrix bx;
  SquareMatrix by;
};
ScaledSystem scaled_system(const ScaledFrame& frame);

TwoSpinSynthesis synth_full(const twospin::SpinSystem& sys, const TwoSpinTarget& target,
                            const SynthOptions& options = {}, const NumericPolicy& policy = {});

}  // namespace spinsteer::synth

#include "spinsteer/pulse_synth.h"

#include <cmath>
#include <stdexcept>

namespace spinsteer::synth {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;
// Control amplitude at which the effective plane problem has psi = 0.
constexpr double kEffectiveAuthority = 1.5;

double wrap2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

SquareMatrix diag4(cplx scale, double a, double b, double c, double d) {
  SquareMatrix m = SquareMatrix::Zero(4, 4);
  m.diagonal() << a, b, c, d;
  return scale * m;
}

SquareMatrix diag3(cplx scale, double a, double b, double c) {
  SquareMatrix m = SquareMatrix::Zero(3, 3);
  m.diagonal() << a, b, c;
  return scale * m;
}

const SquareMatrix& control_matrix(Generator g) {
  static const SquareMatrix bx = block3::Bx();
  static const SquareMatrix by = block3::By();
  static const SquareMatrix zero = SquareMatrix::Zero(3, 3);
  switch (g) {
    case Generator::Bx: return bx;
    case Generator::By: return by;
    case Generator::A1: return zero;
    default: throw std::invalid_argument("S-frame segments use A1, Bx or By only");
  }
}

void push(SFrameSchedule& s, Generator gen, double kbar, const PiDuration& dt) {
  if (dt.value() <= 0.0) return;
  s.segments.push_back({dt, gen, kbar});
}

void push_free(SFrameSchedule& s, const PiDuration& dt) { push(s, Generator::A1, 0.0, dt); }

double neumaier_total(const std::vector<const PulseSchedule*>& parts) {
  double sum = 0.0, comp = 0.0;
  for (const auto* p : parts)
    for (const auto& seg : p->segments) {
      const double t = sum + seg.dt;
      comp += std::abs(sum) >= std::abs(seg.dt) ? (sum - t) + seg.dt : (seg.dt - t) + sum;
      sum = t;
    }
  return sum + comp;
}

SFrameSchedule plane_primitive(double theta, const PrimitivePlan& plan, Generator which) {
  const PulseSchedule steer = su2::steer_theorem3(plan.problem, plane_rotation(theta));
  const double busy = neumaier_total(std::vector<const PulseSchedule*>{&steer, &plan.quarter, &plan.three_quarter});
  PiDuration tau(2 * plan.nbar, 1, -busy / 2.0);
  if (tau.value() < 0.0) {
    if (tau.value() < -1e-12) {
      throw std::domain_error("primitive: 4 nbar pi is shorter than the steering time");
    }
    tau = PiDuration();
  }

  SFrameSchedule out;
  const auto add = [&](const PulseSchedule& s) {
    for (const auto& seg : s.segments) push(out, which, seg.ux, PiDuration(seg.dt));
  };
  add(steer);
  add(plan.quarter);
  push_free(out, tau);
  add(plan.three_quarter);
  push_free(out, tau);
  return out;
}

void require_su3(const SquareMatrix& u, const NumericPolicy& policy) {
  if (u.rows() != 3 || u.cols() != 3) throw std::invalid_argument("expected a 3x3 matrix");
  if (!is_unitary(u, policy.rank_tol) || !is_special(u, policy.rank_tol)) {
    throw std::invalid_argument("matrix is not in SU(3)");
  }
}

// theta, sigma with lower = e^{i sigma} sin(theta) rho, diag = cos(theta) rho.
void plane_angles(cplx lower, cplx diag, double* theta, double* sigma) {
  *theta = std::atan2(std::abs(lower), std::abs(diag));
  *sigma = wrap2pi(std::arg(lower) - std::arg(diag));
}

}  // namespace

ScaledFrame ScaledFrame::from(const twospin::SpinSystem& sys) {
  if (!sys.homonuclear() || !sys.ising()) {
    throw std::invalid_argument("scaled frame needs a homonuclear Ising system");
  }
  const auto& p = sys.params;
  ScaledFrame f;
  f.time_scale = std::abs(p.J) / 6.0;
  f.control_scale = p.gamma1 * 6.0 / std::abs(p.J);
  f.uz = f.control_scale * p.uz_bar;
  f.kbar_bound = std::abs(f.control_scale) * p.M;
  f.conjugate = p.J < 0;
  return f;
}

SquareMatrix ScaledFrame::D() { return diag4(-1.5 * kI, -3, 1, 1, 1); }
SquareMatrix ScaledFrame::A() { return diag4(-1.5 * kI, -1, -1, 1, 1); }
SquareMatrix ScaledFrame::A1() { return diag4(kI, 0, 2, -1, -1); }
SquareMatrix ScaledFrame::Bx() { return so_basis(4, 2, 3); }
SquareMatrix ScaledFrame::By() { return so_basis(4, 2, 4); }
SquareMatrix ScaledFrame::Bz() { return so_basis(4, 3, 4); }

namespace block3 {
SquareMatrix A1() { return diag3(kI, 2, -1, -1); }
SquareMatrix Bx() { return so_basis(3, 1, 2); }
SquareMatrix By() { return so_basis(3, 1, 3); }
SquareMatrix Bz() { return so_basis(3, 2, 3); }
}  // namespace block3

PiDuration SFrameSchedule::total() const {
  PiDurationSum sum;
  for (const auto& s : segments) sum.add(s.dt);
  return sum.total();
}

void SFrameSchedule::append(const SFrameSchedule& other) {
  segments.insert(segments.end(), other.segments.begin(), other.segments.end());
}

SquareMatrix SFrameSchedule::product() const {
  const SquareMatrix a1 = block3::A1();
  SquareMatrix x = identity(3);
  for (const auto& s : segments) x = expm(a1 + s.kbar * control_matrix(s.gen), s.dt.value()) * x;
  return x;
}

PulseSegment rotating_frame_controls(double kbar, double uz, Generator which, double t0, double dt) {
  if (dt < 0.0) throw std::invalid_argument("rotating_frame_controls: negative duration");
  PulseSegment seg;
  seg.dt = dt;
  if (which == Generator::A1 || kbar == 0.0) return seg;
  if (which != Generator::Bx && which != Generator::By) {
    throw std::invalid_argument("rotating_frame_controls: which must be Bx or By");
  }
  if (uz == 0.0) {
    (which == Generator::Bx ? seg.ux : seg.uy) = kbar;
    return seg;
  }
  Modulation mod;
  mod.kbar = kbar;
  mod.omega = uz;
  mod.phase = uz * t0 - (which == Generator::By ? M_PI / 2.0 : 0.0);
  mod.sign_uy = -1.0;
  seg.mod = mod;
  return seg;
}

SquareMatrix plane_rotation(double theta) {
  SquareMatrix r(2, 2);
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return r;
}

PrimitivePlan PrimitivePlan::make(double kbar, std::optional<int> nbar) {
  if (!(kbar > 0.0)) throw std::invalid_argument("primitive: control bound must be positive");
  PrimitivePlan plan;
  plan.kbar = kbar;
  plan.problem.A = 3.0 * kI * pauli::sz();
  plan.problem.B = 2.0 * kI * pauli::sy();
  plan.problem.M = kbar;

  const su2::CanonicalFrame frame =
      su2::canonical_frame(plan.problem.z1(), plan.problem.z2());
  const double psi = std::abs(frame.psi) <= NumericPolicy{}.zero_tol ? 0.0 : frame.psi;
  const int m_max = su2::admissible_m(M_PI, psi);
  plan.uniform_bound = 4.0 * M_PI / frame.lambda1 +
                       m_max * (kTwoPi / frame.lambda1 + M_PI / (2.0 * frame.lambda2));

  plan.quarter = su2::steer_theorem3(plan.problem, plane_rotation(M_PI / 2.0));
  plan.three_quarter = su2::steer_theorem3(plan.problem, plane_rotation(1.5 * M_PI));
  plan.t_quarter = plan.quarter.total_time();
  plan.t_three_quarter = plan.three_quarter.total_time();

  const int minimal = plan.minimal_nbar();
  if (nbar) {
    if (*nbar < minimal) throw std::domain_error("primitive: nbar override is infeasible");
    plan.nbar = *nbar;
  } else {
    plan.nbar = minimal;
  }
  return plan;
}

int PrimitivePlan::minimal_nbar() const {
  const double need = uniform_bound + t_quarter + t_three_quarter;
  return std::max(1, static_cast<int>(std::ceil(need / (4.0 * M_PI))));
}

SFrameSchedule synth_exp_bx(double theta, const PrimitivePlan& plan) {
  return plane_primitive(theta, plan, Generator::Bx);
}

SFrameSchedule synth_exp_by(double theta, const PrimitivePlan& plan) {
  return plane_primitive(theta, plan, Generator::By);
}

SFrameSchedule synth_exp_bz(double theta, const PrimitivePlan& plan) {
  SFrameSchedule out = synth_exp_bx(M_PI / 2.0, plan);
  out.append(synth_exp_by(theta, plan));
  out.append(synth_exp_bx(1.5 * M_PI, plan));
  return out;
}

SquareMatrix plane_unitary(int k, int l, double theta, double sigma) {
  if (k < 1 || l > 3 || k >= l) throw std::invalid_argument("plane_unitary: need 1 <= k < l <= 3");
  SquareMatrix u = identity(3);
  const int i = k - 1, j = l - 1;
  u(i, i) = std::cos(theta);
  u(j, j) = std::cos(theta);
  u(i, j) = -std::sin(theta) * std::polar(1.0, -sigma);
  u(j, i) = std::sin(theta) * std::polar(1.0, sigma);
  return u;
}

SquareMatrix diag_phases(const std::array<double, 3>& alphas) {
  SquareMatrix d = SquareMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) d(i, i) = std::polar(1.0, alphas[i]);
  return d;
}

SquareMatrix MurnaghanParams::matrix() const {
  return diag_phases(alphas) * plane_unitary(1, 2, thetas[0], sigmas[0]) *
         plane_unitary(1, 3, thetas[1], sigmas[1]) * plane_unitary(2, 3, thetas[2], sigmas[2]);
}

MurnaghanParams murnaghan_decompose(const SquareMatrix& u, const NumericPolicy& policy) {
  require_su3(u, policy);
  MurnaghanParams p;
  plane_angles(u(2, 1), u(2, 2), &p.thetas[2], &p.sigmas[2]);
  const SquareMatrix w = u * plane_unitary(2, 3, p.thetas[2], p.sigmas[2]).adjoint();
  plane_angles(w(2, 0), w(2, 2), &p.thetas[1], &p.sigmas[1]);
  const SquareMatrix y = w * plane_unitary(1, 3, p.thetas[1], p.sigmas[1]).adjoint();
  plane_angles(y(1, 0), y(1, 1), &p.thetas[0], &p.sigmas[0]);
  const SquareMatrix d = y * plane_unitary(1, 2, p.thetas[0], p.sigmas[0]).adjoint();
  p.alphas[0] = std::arg(d(0, 0));
  p.alphas[1] = std::arg(d(1, 1));
  p.alphas[2] = -p.alphas[0] - p.alphas[1];
  return p;
}

namespace {

SFrameSchedule bookended(double sigma, const SFrameSchedule& core) {
  const double s = wrap2pi(sigma + M_PI) / 3.0;
  SFrameSchedule out;
  push_free(out, PiDuration(s));
  out.append(core);
  push_free(out, PiDuration(2, 1, -s));
  return out;
}

}  // namespace

SFrameSchedule synth_u12(double theta, double sigma, const PrimitivePlan& plan) {
  return bookended(sigma, synth_exp_bx(theta, plan));
}

SFrameSchedule synth_u13(double theta, double sigma, const PrimitivePlan& plan) {
  return bookended(sigma, synth_exp_by(theta, plan));
}

SFrameSchedule synth_u23(double theta, double sigma, const PrimitivePlan& plan) {
  SFrameSchedule out = synth_exp_bx(1.5 * M_PI, plan);
  out.append(synth_u13(theta, sigma - M_PI, plan));
  out.append(synth_exp_bx(M_PI / 2.0, plan));
  return out;
}

SFrameSchedule synth_diag(const std::array<double, 3>& alphas, const PrimitivePlan& plan) {
  const double sum = alphas[0] + alphas[1] + alphas[2];
  if (std::abs(sum) > 1e-9 * std::max(1.0, std::abs(alphas[0]) + std::abs(alphas[1]))) {
    throw std::invalid_argument("synth_diag: phases must sum to zero");
  }
  const double t1 = wrap2pi((2.0 * alphas[1] + alphas[0]) / 3.0);
  const double t2 = wrap2pi((2.0 * alphas[0] + alphas[1]) / 3.0);
  SFrameSchedule out;
  push_free(out, PiDuration(t2));
  out.append(synth_exp_bx(1.5 * M_PI, plan));
  push_free(out, PiDuration(t1));
  out.append(synth_exp_bx(M_PI / 2.0, plan));
  return out;
}

SFrameSchedule identity_gadget(const PiDuration& tau, const PrimitivePlan& plan) {
  if (tau.value() < 0.0) throw std::invalid_argument("identity_gadget: negative tau");
  SFrameSchedule out;
  push_free(out, tau);
  out.append(synth_exp_bx(1.5 * M_PI, plan));
  push_free(out, tau);
  out.append(synth_exp_bx(M_PI / 2.0, plan));
  out.append(synth_exp_by(1.5 * M_PI, plan));
  push_free(out, tau);
  out.append(synth_exp_by(M_PI / 2.0, plan));
  return out;
}

SquareMatrix short_identity_product(double tau) {
  const SquareMatrix a = diag3(-kI, -1.5, 1.5, 0.0);
  const SquareMatrix bx = block3::Bx();
  return expm(a, tau) * expm(bx, -M_PI / 2.0) * expm(a, tau) * expm(bx, M_PI / 2.0);
}

SquareMatrix long_identity_product(double tau) {
  const SquareMatrix a1 = block3::A1();
  const SquareMatrix bx = block3::Bx(), by = block3::By();
  return expm(by, M_PI / 2.0) * expm(a1, tau) * expm(by, -M_PI / 2.0) * expm(bx, M_PI / 2.0) *
         expm(a1, tau) * expm(bx, -M_PI / 2.0) * expm(a1, tau);
}

SquareMatrix TwoSpinTarget::full(const twospin::SpinSystem& sys) const {
  const SquareMatrix d = twospin::to_diag(sys.D);
  const double t_phys = T_f * 6.0 / std::abs(sys.params.J);
  return expm(d, t_phys / 3.0) * S_f;
}

double TwoSpinSynthesis::physical_time() const { return physical.total_time(); }

ScaledSystem scaled_system(const ScaledFrame& frame) {
  return {ScaledFrame::A() + frame.uz * ScaledFrame::Bz(), ScaledFrame::Bx(), ScaledFrame::By()};
}

TwoSpinSynthesis synth_full(const twospin::SpinSystem& sys, const TwoSpinTarget& target,
                            const SynthOptions& options, const NumericPolicy& policy) {
  if (!sys.homonuclear(policy) || !sys.ising(policy)) {
    throw std::invalid_argument("synth_full: needs a homonuclear Ising system");
  }
  if (!twospin::has_block_form(target.S_f, 1e-10)) {
    throw std::invalid_argument("synth_full: S_f must have the form diag(1, G), G in SU(3)");
  }
  if (target.T_f < 0.0) throw std::invalid_argument("synth_full: T_f must be nonnegative");

  TwoSpinSynthesis out;
  out.frame = ScaledFrame::from(sys);
  const double kbar = std::min(out.frame.kbar_bound, kEffectiveAuthority);
  out.plan = PrimitivePlan::make(kbar, options.nbar);
  const int nbar = out.plan.nbar;

  // T_f + 4 n pi >= (12 + 28 nbar) pi + 16 nbar pi.
  const double budget_quarters = 3.0 + 11.0 * nbar - target.T_f / (4.0 * M_PI);
  const int n_min = std::max(0, static_cast<int>(std::ceil(budget_quarters - 1e-12)));
  if (options.n && *options.n < n_min) throw std::domain_error("synth_full: n override is infeasible");
  out.n = options.n.value_or(n_min);
  out.scaled_target = PiDuration(4 * out.n, 1, target.T_f);

  const SquareMatrix s_f = out.frame.conjugate ? SquareMatrix(target.S_f.conjugate()) : target.S_f;
  const SquareMatrix u_f =
      expm(block3::Bz(), -out.frame.uz * out.scaled_target.value()) * s_f.block(1, 1, 3, 3);
  out.murnaghan = murnaghan_decompose(u_f, policy);
  const MurnaghanParams& mp = out.murnaghan;

  SFrameSchedule& s = out.s_frame;
  s.append(synth_u23(mp.thetas[2], mp.sigmas[2], out.plan));
  s.append(synth_u13(mp.thetas[1], mp.sigmas[1], out.plan));
  s.append(synth_u12(mp.thetas[0], mp.sigmas[0], out.plan));
  s.append(synth_diag(mp.alphas, out.plan));

  const PiDuration used = s.total();
  PiDuration t_bar = out.scaled_target - used - PiDuration::pi_multiple(16 * nbar);
  if (t_bar.value() < 0.0) {
    if (t_bar.value() < -1e-12) throw std::logic_error("synth_full: time budget overrun");
    t_bar = PiDuration(t_bar.pi_num(), t_bar.pi_den(), t_bar.remainder() - t_bar.value());
  }
  s.append(identity_gadget(t_bar.divided_by(3), out.plan));
  out.scaled_total = s.total();

  const double c = out.frame.control_scale;
  const double ts = out.frame.time_scale;
  PiDurationSum clock;
  for (const auto& seg : s.segments) {
    const double t0 = clock.total().value();
    clock.add(seg.dt);
    const PulseSegment scaled =
        rotating_frame_controls(seg.kbar, out.frame.uz, seg.gen, t0, seg.dt.value());
    out.scaled_controls.segments.push_back(scaled);

    PulseSegment phys;
    phys.dt = scaled.dt / ts;
    if (scaled.mod) {
      Modulation m = *scaled.mod;
      m.kbar /= c;
      m.omega *= ts;
      m.sign_uy = -m.sign_uy;
      phys.mod = m;
    } else {
      phys.ux = scaled.ux / c;
      phys.uy = -scaled.uy / c;
    }
    out.physical.segments.push_back(phys);
  }

  out.target_diag = target.full(sys);
  out.target_lab = twospin::to_lab(out.target_diag);
  return out;
}

}  // namespace spinsteer::synth

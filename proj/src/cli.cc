#include "spinsteer/cli.h"

#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spinsteer/json_io.h"
#include "spinsteer/pulse_synth.h"
#include "spinsteer/simkit.h"
#include "spinsteer/so3_decomp.h"
#include "spinsteer/su2_decomp.h"
#include "spinsteer/twospin.h"

namespace spinsteer {
namespace {

using io::json;

constexpr int kVerifyFailed = 2;

struct Globals {
  std::optional<double> tol;
  bool verbose = false;
};

double tol_or(const Globals& g, double fallback) { return g.tol.value_or(fallback); }

SquareMatrix load_matrix(const std::string& path) {
  return io::matrix_from_json(io::read_json_file(path));
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// Grid "lo:hi:count" with an optional trailing k on lo/hi meaning multiples of k.
struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

double parse_bound(std::string s, double k) {
  bool relative = false;
  if (!s.empty() && s.back() == 'k') {
    relative = true;
    s.pop_back();
  }
  const double v = std::stod(s);
  return relative ? v * k : v;
}

Grid parse_grid(const std::string& spec, double k) {
  std::stringstream ss(spec);
  std::string lo, hi, count;
  if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, count)) {
    throw std::invalid_argument("grid must look like lo:hi:count");
  }
  Grid g{parse_bound(lo, k), parse_bound(hi, k), std::stoi(count)};
  if (!(g.lo > 0.0) || !(g.hi >= g.lo) || g.count < 1) {
    throw std::invalid_argument("grid needs 0 < lo <= hi and count >= 1");
  }
  return g;
}

BilinearSystem system_from_json(const json& j, double* bound) {
  if (j.contains("gamma1")) {
    const auto sys = twospin::build_system(io::spin_params_from_json(j));
    *bound = sys.params.M;
    return {sys.drift(), {sys.Bx, sys.By}};
  }
  if (j.contains("A") && j.contains("B")) {
    *bound = j.value("M", std::numeric_limits<double>::infinity());
    return {io::matrix_from_json(j.at("A")), {io::matrix_from_json(j.at("B"))}};
  }
  if (j.contains("drift") && j.contains("controls")) {
    BilinearSystem s{io::matrix_from_json(j.at("drift")), {}};
    for (const auto& c : j.at("controls")) s.controls.push_back(io::matrix_from_json(c));
    *bound = j.value("M", std::numeric_limits<double>::infinity());
    return s;
  }
  throw std::invalid_argument(
      "system JSON needs spin parameters, {\"A\",\"B\"} or {\"drift\",\"controls\"}");
}

SquareMatrix block_target(const SquareMatrix& sf) {
  if (sf.rows() == 4) return sf;
  if (sf.rows() == 3) {
    SquareMatrix full = identity(4);
    full.block(1, 1, 3, 3) = sf;
    return full;
  }
  throw std::invalid_argument("S_f must be 4x4 block form or the 3x3 block");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bang-bang control synthesis for one- and two-spin systems"};
  app.name("spinsteer");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "Residual tolerance for verification");
  app.add_flag("--verbose", g.verbose, "Human-readable tables on stderr");

  // decompose
  auto* decompose = app.add_subcommand("decompose", "Factor a target into subgroup products");
  decompose->require_subcommand(1);
  std::string a_path, b_path, target_path, z1_path, z2_path;
  double M = 1.0;
  auto* dec_su2 = decompose->add_subcommand("su2", "Generalized Euler factorization on SU(2)");
  dec_su2->add_option("--A", a_path)->required();
  dec_su2->add_option("--B", b_path)->required();
  dec_su2->add_option("--M", M)->required();
  dec_su2->add_option("--target", target_path)->required();
  auto* dec_so3 = decompose->add_subcommand("so3", "Alternating factorization on SO(3)");
  dec_so3->add_option("--Z1", z1_path)->required();
  dec_so3->add_option("--Z2", z2_path)->required();
  dec_so3->add_option("--target", target_path)->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize control schedules");
  synth->require_subcommand(1);
  std::optional<double> pad_time;
  auto* one_spin = synth->add_subcommand("one-spin", "Bang-bang schedule for one spin");
  one_spin->add_option("--A", a_path)->required();
  one_spin->add_option("--B", b_path)->required();
  one_spin->add_option("--M", M)->required();
  one_spin->add_option("--target", target_path)->required();
  one_spin->add_option("--T", pad_time, "Pad the schedule to this final time");
  std::string system_path, sf_path, schedule_path;
  double tf = 0.0;
  std::optional<int> nbar, n;
  bool no_verify = false;
  auto* two_spin = synth->add_subcommand("two-spin", "Lab-frame schedule for two homonuclear spins");
  two_spin->add_option("--system", system_path)->required();
  two_spin->add_option("--Sf", sf_path)->required();
  two_spin->add_option("--Tf", tf)->required();
  two_spin->add_option("--nbar", nbar);
  two_spin->add_option("--n", n);
  two_spin->add_flag("--no-verify", no_verify);

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Propagate a schedule");
  simulate_cmd->add_option("--system", system_path)->required();
  simulate_cmd->add_option("--schedule", schedule_path)->required();
  simulate_cmd->add_option("--target", target_path);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Parameter studies");
  analyze->require_subcommand(1);
  std::string grid_spec;
  auto* psi_cmd = analyze->add_subcommand("psi", "|psi(M)| and order of generation on a log grid");
  psi_cmd->add_option("--A", a_path)->required();
  psi_cmd->add_option("--B", b_path)->required();
  psi_cmd->add_option("--grid", grid_spec)->required();

  // classify / reach
  auto* classify = app.add_subcommand("classify", "Lie-algebra controllability class");
  classify->add_option("--system", system_path)->required();
  double reach_T = 0.0;
  std::string basis = "lab";
  auto* reach = app.add_subcommand("reach", "Large-time reachability test");
  reach->add_option("--system", system_path)->required();
  reach->add_option("--T", reach_T)->required();
  reach->add_option("--target", target_path)->required();
  reach->add_option("--basis", basis)->check(CLI::IsMember({"lab", "diag"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (dec_su2->parsed()) {
      const su2::Su2Problem problem{load_matrix(a_path), load_matrix(b_path), M};
      problem.validate();
      const SquareMatrix target = load_matrix(target_path);
      json result;
      PulseSchedule schedule;
      double residual = 0.0;
      if (problem.proportional()) {
        schedule = su2::steer_proportional(problem, target);
        SimResult sim = simulate({problem.A, {problem.B}}, schedule, target);
        residual = *sim.residual_to_target;
        result["route"] = "proportional";
      } else {
        const auto frame = su2::canonical_frame(problem.z1(), problem.z2());
        const auto f = su2::factorize_theorem2(frame, target);
        schedule = steer_theorem3(problem, target);
        residual = f.sequence.residual;
        result["route"] = "theorem2";
        result["sequence"] = io::sequence_to_json(f.sequence);
        result["m"] = f.params.m;
        result["psi"] = frame.psi;
        result["lambda1"] = frame.lambda1;
        result["lambda2"] = frame.lambda2;
        result["inner_factor_count"] = f.inner_factor_count();
        result["lowenthal_order"] = su2::lowenthal_order(frame.psi);
        result["euler"] = {f.params.euler.alpha, f.params.euler.beta, f.params.euler.gamma};
      }
      result["schedule"] = io::schedule_to_json(schedule);
      result["residual"] = residual;
      emit(out, result);
      return residual < tol_or(g, 1e-9) ? 0 : kVerifyFailed;
    }

    if (dec_so3->parsed()) {
      const auto pair = so3::canonicalize_so3(load_matrix(z1_path), load_matrix(z2_path));
      const auto f = so3::factorize_so3(pair, load_matrix(target_path));
      json result = {{"sequence", io::sequence_to_json(f.sequence)},
                     {"normalized", io::sequence_to_json(f.normalized)},
                     {"rho", pair.rho},
                     {"psi", pair.psi()},
                     {"scale1", pair.scale1},
                     {"scale2", pair.scale2},
                     {"m", f.m},
                     {"euler", {f.euler.alpha, f.euler.beta, f.euler.gamma}},
                     {"residual", f.sequence.residual}};
      emit(out, result);
      return f.sequence.residual < tol_or(g, 1e-9) ? 0 : kVerifyFailed;
    }

    if (one_spin->parsed()) {
      const su2::Su2Problem problem{load_matrix(a_path), load_matrix(b_path), M};
      const SquareMatrix target = load_matrix(target_path);
      PulseSchedule schedule = su2::steer_theorem3(problem, target);
      if (pad_time) schedule = su2::pad_to_time(problem, schedule, *pad_time);
      SimOptions opts;
      opts.control_bound = M;
      const SimResult sim = simulate({problem.A, {problem.B}}, schedule, target, opts);
      json result = {{"schedule", io::schedule_to_json(schedule)},
                     {"residual", *sim.residual_to_target},
                     {"warnings", sim.warnings}};
      emit(out, result);
      return *sim.residual_to_target < tol_or(g, 1e-8) ? 0 : kVerifyFailed;
    }

    if (two_spin->parsed()) {
      const auto params = io::spin_params_from_json(io::read_json_file(system_path));
      const auto sys = twospin::build_system(params);
      synth::TwoSpinTarget target{tf, block_target(load_matrix(sf_path))};
      const auto s = synth::synth_full(sys, target, {nbar, n});
      json result = {{"schedule", io::schedule_to_json(s.physical)},
                     {"nbar", s.plan.nbar},
                     {"n", s.n},
                     {"kbar", s.plan.kbar},
                     {"scaled_total", s.scaled_total.value()},
                     {"scaled_target", s.scaled_target.value()},
                     {"scaled_target_exact", s.scaled_target.str()},
                     {"physical_time", s.physical_time()},
                     {"target_lab", io::matrix_to_json(s.target_lab)}};
      int code = 0;
      if (!no_verify) {
        SimOptions opts;
        opts.control_bound = params.M;
        opts.keep_log = false;
        const SimResult sim =
            simulate({sys.drift(), {sys.Bx, sys.By}}, s.physical, s.target_lab, opts);
        result["residual"] = *sim.residual_to_target;
        result["warnings"] = sim.warnings;
        if (!(*sim.residual_to_target < tol_or(g, 1e-6))) code = kVerifyFailed;
      }
      if (g.verbose) {
        err << "segments " << s.physical.segments.size() << ", scaled time "
            << s.scaled_total.str() << ", nbar " << s.plan.nbar << ", n " << s.n << '\n';
      }
      emit(out, result);
      return code;
    }

    if (simulate_cmd->parsed()) {
      double bound = std::numeric_limits<double>::infinity();
      const BilinearSystem sys = system_from_json(io::read_json_file(system_path), &bound);
      const PulseSchedule schedule = io::schedule_from_json(io::read_json_file(schedule_path));
      std::optional<SquareMatrix> target;
      if (!target_path.empty()) target = load_matrix(target_path);
      SimOptions opts;
      opts.control_bound = bound;
      const SimResult sim = simulate(sys, schedule, target, opts);
      if (g.verbose) {
        for (const auto& e : sim.log) {
          err << std::setw(14) << e.t << "  " << e.description << "  tr=" << e.checksum << '\n';
        }
      }
      emit(out, io::sim_result_to_json(sim));
      if (sim.residual_to_target && !(*sim.residual_to_target < tol_or(g, 1e-8))) {
        return kVerifyFailed;
      }
      return 0;
    }

    if (psi_cmd->parsed()) {
      su2::Su2Problem problem{load_matrix(a_path), load_matrix(b_path), 1.0};
      problem.validate();
      const double k = su2::control_authority(problem.A, problem.B);
      const Grid grid = parse_grid(grid_spec, k);
      json rows = json::array();
      if (g.verbose) err << std::setw(16) << "M" << std::setw(16) << "|psi|" << std::setw(6) << "s\n";
      for (int i = 0; i < grid.count; ++i) {
        const double frac = grid.count == 1 ? 0.0 : static_cast<double>(i) / (grid.count - 1);
        const double m_val = grid.lo * std::pow(grid.hi / grid.lo, frac);
        const double psi = su2::psi_of_M(problem, m_val);
        json row = {{"M", m_val}, {"psi", psi}};
        if (psi < 1.0) {
          row["s"] = su2::lowenthal_order(psi);
        } else {
          row["s"] = nullptr;
        }
        if (g.verbose) {
          err << std::setw(16) << m_val << std::setw(16) << psi << std::setw(6)
              << (row["s"].is_null() ? std::string("-") : row["s"].dump()) << '\n';
        }
        rows.push_back(row);
      }
      emit(out, {{"k", k}, {"rows", rows}});
      return 0;
    }

    if (classify->parsed()) {
      const auto sys = twospin::build_system(io::spin_params_from_json(io::read_json_file(system_path)));
      const auto c = twospin::classify_controllability(sys);
      emit(out, {{"class", twospin::to_string(c.cls)}, {"dim", c.dim}});
      return 0;
    }

    if (reach->parsed()) {
      const auto sys = twospin::build_system(io::spin_params_from_json(io::read_json_file(system_path)));
      const bool member = twospin::member_large_time(
          sys, load_matrix(target_path), reach_T,
          basis == "lab" ? twospin::Basis::lab : twospin::Basis::diag);
      emit(out, {{"member", member}, {"threshold", twospin::large_time_threshold(sys)}});
      return member ? 0 : kVerifyFailed;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace spinsteer

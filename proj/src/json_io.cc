#include "spinsteer/json_io.h"

#include <fstream>
#include <stdexcept>

namespace spinsteer::io {
namespace {

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw std::invalid_argument(std::string("missing JSON field \"") + key + "\"");
  }
  return j.at(key);
}

json cplx_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json matrix_to_json(const SquareMatrix& x) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < x.rows(); ++i) {
    json rr = json::array(), ii = json::array();
    for (int k = 0; k < x.cols(); ++k) {
      rr.push_back(x(i, k).real());
      ii.push_back(x(i, k).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"dim", x.rows()}, {"re", re}, {"im", im}};
}

SquareMatrix matrix_from_json(const json& j) {
  const int n = need(j, "dim").get<int>();
  if (n < 1) throw std::invalid_argument("matrix JSON: dim must be positive");
  const json& re = need(j, "re");
  const json* im = j.contains("im") ? &j.at("im") : nullptr;
  if (!re.is_array() || static_cast<int>(re.size()) != n) {
    throw std::invalid_argument("matrix JSON: \"re\" must have dim rows");
  }
  SquareMatrix x(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(re[i].size()) != n) throw std::invalid_argument("matrix JSON: ragged row");
    for (int k = 0; k < n; ++k) {
      const double imag = im ? im->at(i).at(k).get<double>() : 0.0;
      x(i, k) = cplx(re[i][k].get<double>(), imag);
    }
  }
  return x;
}

json sequence_to_json(const FactorSequence& seq) {
  json steps = json::array();
  for (const auto& s : seq.steps) steps.push_back({{"gen", to_string(s.gen)}, {"t", s.duration}});
  json out = {{"steps", steps}};
  if (!seq.generators.empty()) out["residual"] = seq.residual;
  return out;
}

FactorSequence sequence_from_json(const json& j) {
  FactorSequence seq;
  for (const auto& s : need(j, "steps")) {
    const double t = need(s, "t").get<double>();
    if (t < 0.0) throw std::invalid_argument("sequence JSON: negative duration");
    seq.steps.push_back({generator_from_string(need(s, "gen").get<std::string>()), t});
  }
  seq.audit = seq.steps;
  return seq;
}

json schedule_to_json(const PulseSchedule& s) {
  json segs = json::array();
  for (const auto& seg : s.segments) {
    if (seg.mod) {
      segs.push_back({{"dt", seg.dt},
                      {"mod",
                       {{"kbar", seg.mod->kbar},
                        {"omega", seg.mod->omega},
                        {"phase", seg.mod->phase},
                        {"sign_uy", seg.mod->sign_uy}}}});
    } else {
      segs.push_back({{"dt", seg.dt}, {"ux", seg.ux}, {"uy", seg.uy}});
    }
  }
  return {{"segments", segs}, {"total_time", s.total_time()}};
}

PulseSchedule schedule_from_json(const json& j) {
  PulseSchedule s;
  for (const auto& e : need(j, "segments")) {
    PulseSegment seg;
    seg.dt = need(e, "dt").get<double>();
    if (seg.dt < 0.0) throw std::invalid_argument("schedule JSON: negative duration");
    if (e.contains("mod")) {
      const json& m = e.at("mod");
      Modulation mod;
      mod.kbar = need(m, "kbar").get<double>();
      mod.omega = need(m, "omega").get<double>();
      mod.phase = m.value("phase", 0.0);
      mod.sign_uy = m.value("sign_uy", -1.0);
      seg.mod = mod;
    } else {
      seg.ux = e.value("ux", 0.0);
      seg.uy = e.value("uy", 0.0);
    }
    s.segments.push_back(seg);
  }
  return s;
}

json spin_params_to_json(const twospin::SpinParams& p) {
  return {{"gamma1", p.gamma1}, {"gamma2", p.gamma2}, {"J", p.J},   {"uz", p.uz_bar},
          {"M", p.M},           {"abc", {p.abc[0], p.abc[1], p.abc[2]}}};
}

twospin::SpinParams spin_params_from_json(const json& j) {
  twospin::SpinParams p;
  p.gamma1 = need(j, "gamma1").get<double>();
  p.gamma2 = need(j, "gamma2").get<double>();
  p.J = need(j, "J").get<double>();
  p.uz_bar = j.value("uz", 0.0);
  p.M = j.value("M", 1.0);
  if (j.contains("abc")) {
    const json& abc = j.at("abc");
    if (!abc.is_array() || abc.size() != 3) throw std::invalid_argument("\"abc\" needs 3 entries");
    p.abc = {abc[0].get<double>(), abc[1].get<double>(), abc[2].get<double>()};
  } else {
    p.abc = {0.0, 0.0, p.J};
  }
  return p;
}

json sim_result_to_json(const SimResult& r) {
  json log = json::array();
  for (const auto& e : r.log) {
    log.push_back({{"t", e.t}, {"segment", e.description}, {"trace", cplx_to_json(e.checksum)}});
  }
  json out = {{"endpoint", matrix_to_json(r.endpoint)},
              {"unitarity_drift", r.unitarity_drift},
              {"total_time", r.total_time},
              {"max_step_change", r.max_step_change},
              {"warnings", r.warnings},
              {"log", log}};
  out["residual_to_target"] = r.residual_to_target ? json(*r.residual_to_target) : json(nullptr);
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace spinsteer::io

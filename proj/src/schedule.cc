#include "spinsteer/schedule.h"

#include <cmath>
#include <stdexcept>

namespace spinsteer {

std::string to_string(Generator g) {
  switch (g) {
    case Generator::Z1: return "Z1";
    case Generator::Z2: return "Z2";
    case Generator::A1: return "A1";
    case Generator::Bx: return "Bx";
    case Generator::By: return "By";
    case Generator::Bz: return "Bz";
    case Generator::Drift: return "Drift";
  }
  return "?";
}

Generator generator_from_string(const std::string& name) {
  for (Generator g : {Generator::Z1, Generator::Z2, Generator::A1, Generator::Bx, Generator::By,
                      Generator::Bz, Generator::Drift}) {
    if (to_string(g) == name) return g;
  }
  throw std::invalid_argument("unknown generator tag: " + name);
}

int FactorSequence::dim() const {
  if (generators.empty()) throw std::logic_error("FactorSequence: no generators recorded");
  return static_cast<int>(generators.begin()->second.rows());
}

SquareMatrix FactorSequence::product() const {
  SquareMatrix x = identity(dim());
  for (const auto& step : steps) {
    const auto it = generators.find(step.gen);
    if (it == generators.end()) {
      throw std::logic_error("FactorSequence: missing generator " + to_string(step.gen));
    }
    x = expm(it->second, step.duration) * x;
  }
  return x;
}

int merged_factor_count(const std::vector<FactorStep>& steps) {
  int count = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i == 0 || steps[i].gen != steps[i - 1].gen) ++count;
  }
  return count;
}

std::vector<FactorStep> prune_zero_steps(const std::vector<FactorStep>& steps, double tol) {
  std::vector<FactorStep> out;
  for (const auto& s : steps)
    if (s.duration > tol) out.push_back(s);
  return out;
}

double PulseSegment::ux_at(double tau) const {
  if (!mod) return ux;
  return mod->kbar * std::cos(mod->omega * tau + mod->phase);
}

double PulseSegment::uy_at(double tau) const {
  if (!mod) return uy;
  return mod->sign_uy * mod->kbar * std::sin(mod->omega * tau + mod->phase);
}

double PulseSegment::peak_amplitude() const {
  if (mod) return std::abs(mod->kbar);
  return std::max(std::abs(ux), std::abs(uy));
}

double PulseSchedule::total_time() const {
  double sum = 0.0, comp = 0.0;
  for (const auto& s : segments) {
    const double t = sum + s.dt;
    comp += (std::abs(sum) >= std::abs(s.dt)) ? (sum - t) + s.dt : (s.dt - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace spinsteer

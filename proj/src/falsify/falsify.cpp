#include "drivebound/falsify/falsify.hpp"

#include <algorithm>
#include <cmath>

#include "drivebound/common/error.hpp"
#include "drivebound/opt/optimizers.hpp"
#include "drivebound/stl/robustness.hpp"

namespace drivebound::falsify {

std::string_view solver_name(Solver s) {
  return s == Solver::NelderMead ? "nelder-mead" : "cma-es";
}

std::optional<Solver> solver_from_name(std::string_view name) {
  if (name == "nelder-mead" || name == "neldermead" || name == "nm") return Solver::NelderMead;
  if (name == "cma-es" || name == "cmaes") return Solver::CmaEs;
  return std::nullopt;
}

void FalsificationProblem::validate() const {
  if (!formula.parameters().empty()) {
    throw ConfigError("falsification formula has unbound parameters");
  }
  if (!(u_lo < u_hi)) throw ConfigError("falsification input range requires u_lo < u_hi");
  if (segments == 0) throw ConfigError("need at least one input segment");
  if (!(segment_duration > 0.0)) throw ConfigError("segment duration must be positive");
  if (static_cast<double>(segments) * segment_duration + 1e-9 < horizon) {
    throw ConfigError("segments x segment_duration must cover the horizon");
  }
  if (accept_threshold > 0.0) throw ConfigError("acceptance threshold must be <= 0");
  if (accept_band && *accept_band < 0.0) throw ConfigError("acceptance band must be >= 0");
}

double input_distance(const sim::InputSignal& a, const sim::InputSignal& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size() && i < b.values.size(); ++i) {
    double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<Counterexample> diversity_filter(std::vector<Counterexample> candidates,
                                             double min_distance) {
  if (min_distance < 0.0) throw ConfigError("min_distance must be >= 0");
  if (min_distance == 0.0) return candidates;
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Counterexample& a, const Counterexample& b) {
                     return a.robustness < b.robustness;
                   });
  std::vector<Counterexample> kept;
  for (auto& c : candidates) {
    bool ok = true;
    for (const auto& k : kept) {
      if (input_distance(c.input, k.input) < min_distance) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(std::move(c));
  }
  return kept;
}

std::vector<Counterexample> falsify(const FalsificationProblem& problem,
                                    const sim::LightSchedule& schedule,
                                    const sim::ModelConfig& cfg, double min_distance,
                                    std::uint64_t seed) {
  problem.validate();
  problem.x0.validate(cfg, schedule);

  struct Candidate {
    std::vector<double> x;
    double rho;
  };
  std::vector<Candidate> archive;
  archive.reserve(problem.budget);

  auto objective = [&](std::span<const double> x) {
    sim::InputSignal input{problem.segment_duration,
                           std::vector<double>(x.begin(), x.end())};
    stl::Trace tr =
        sim::simulate(problem.x0, input, problem.horizon, cfg.dt, schedule, cfg);
    double rho = stl::robustness(problem.formula, tr, 0);
    archive.push_back(Candidate{std::vector<double>(x.begin(), x.end()), rho});
    return rho;
  };

  opt::Bounds bounds{std::vector<double>(problem.segments, problem.u_lo),
                     std::vector<double>(problem.segments, problem.u_hi)};
  std::vector<double> x0(problem.segments, 0.5 * (problem.u_lo + problem.u_hi));

  if (problem.solver == Solver::NelderMead) {
    opt::nelder_mead(objective, x0, bounds, problem.budget);
  } else {
    double sigma0 = 0.3 * (problem.u_hi - problem.u_lo);
    opt::cma_es(objective, x0, sigma0, bounds, 0, problem.budget, seed);
  }

  // Sub-optimal acceptance: every evaluation at or below the threshold is a
  // candidate, not just the optimizer's best point.
  std::vector<Counterexample> candidates;
  for (auto& c : archive) {
    if (c.rho > problem.accept_threshold) continue;
    if (problem.accept_band && c.rho < -*problem.accept_band) continue;
    Counterexample ce;
    ce.input = sim::InputSignal{problem.segment_duration, std::move(c.x)};
    ce.robustness = c.rho;
    ce.formula_id = problem.formula_id;
    ce.params = problem.params;
    ce.x0 = problem.x0;
    ce.solver = problem.solver;
    ce.seed = seed;
    candidates.push_back(std::move(ce));
  }

  candidates = diversity_filter(std::move(candidates), min_distance);

  // Materialize traces for the survivors; re-simulation must reproduce the
  // archived robustness.
  for (auto& c : candidates) {
    c.trace = sim::simulate(problem.x0, c.input, problem.horizon, cfg.dt, schedule, cfg);
    c.trace.label = stl::TraceLabel::NonHuman;
    double rho = stl::robustness(problem.formula, c.trace, 0);
    if (std::fabs(rho - c.robustness) > 1e-9) {
      throw Error("counterexample failed re-validation (rho " + std::to_string(rho) + " vs " +
                  std::to_string(c.robustness) + ")");
    }
  }
  return candidates;
}

}  // namespace drivebound::falsify

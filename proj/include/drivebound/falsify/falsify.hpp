#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drivebound/mining/template.hpp"
#include "drivebound/sim/model.hpp"
#include "drivebound/stl/formula.hpp"
#include "drivebound/stl/trace.hpp"

namespace drivebound::falsify {

enum class Solver { NelderMead, CmaEs };

std::string_view solver_name(Solver s);
std::optional<Solver> solver_from_name(std::string_view name);

// Minimize robustness of a bound formula over piecewise-constant inputs from
// a fixed initial state.
struct FalsificationProblem {
  stl::Formula formula;  // fully bound
  std::string formula_id;
  mining::ParamPoint params;  // instantiation record, informational
  sim::HybridState x0;
  double u_lo = -6.0;  // input set U
  double u_hi = 3.0;
  std::size_t segments = 6;
  double segment_duration = 0.5;
  double horizon = 3.0;
  Solver solver = Solver::CmaEs;
  std::size_t budget = 300;
  double accept_threshold = 0.0;      // keep candidates with rho <= this (<= 0)
  std::optional<double> accept_band;  // additionally require rho >= -band

  void validate() const;
};

struct Counterexample {
  stl::Trace trace;  // labeled non-human
  sim::InputSignal input;
  double robustness = 0.0;
  std::string formula_id;
  mining::ParamPoint params;
  sim::HybridState x0;
  Solver solver = Solver::CmaEs;
  std::uint64_t seed = 0;
};

// Greedy selection in ascending robustness order: a candidate survives iff
// its input vector is at least min_distance (Euclidean) from every survivor.
// min_distance == 0 disables the filter.
std::vector<Counterexample> diversity_filter(std::vector<Counterexample> candidates,
                                             double min_distance);

// Runs the configured solver, harvests every evaluated candidate at or below
// the acceptance threshold (inside the optional band), applies the diversity
// filter and re-simulates the survivors. Every returned counterexample
// reproduces its stored robustness exactly on re-simulation. An empty result
// is a legal outcome.
std::vector<Counterexample> falsify(const FalsificationProblem& problem,
                                    const sim::LightSchedule& schedule,
                                    const sim::ModelConfig& cfg, double min_distance,
                                    std::uint64_t seed);

double input_distance(const sim::InputSignal& a, const sim::InputSignal& b);

}  // namespace drivebound::falsify

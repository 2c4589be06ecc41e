#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drivebound/falsify/falsify.hpp"

namespace drivebound::falsify {

// Discretization of initial (d_x, v_x); light state and t_el are derived per
// formula so the template antecedent can activate.
struct X0GridSpec {
  std::size_t nd = 5;
  std::size_t nv = 5;
  double d_lo = 20.0;
  double d_hi = 200.0;
  double v_lo = 0.0;
  double v_hi = 25.0;

  nlohmann::json to_json() const;
  static X0GridSpec from_json(const nlohmann::json& j);
};

struct GenerateConfig {
  Solver solver = Solver::CmaEs;
  std::size_t budget = 300;
  double min_distance = 0.5;
  double accept_threshold = 0.0;
  std::optional<double> accept_band;
  std::size_t frontier_samples = 5;     // param points drawn per formula
  std::size_t max_per_formula = 3000;   // cap after the diversity filter
  std::size_t segments = 6;
  double segment_duration = 0.5;
  double horizon = 3.0;
  X0GridSpec grid;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency

  nlohmann::json to_json() const;
  static GenerateConfig from_json(const nlohmann::json& j);
};

// A template together with the mined boundary points to falsify against.
struct MinedSpec {
  mining::PstlTemplate tmpl;
  std::vector<mining::ParamPoint> points;
};

struct NegativeCorpus {
  std::vector<Counterexample> examples;
  nlohmann::json manifest;
};

// Algorithm: for every formula, every sampled frontier point and every grid
// initial condition, run the falsifier and accumulate the survivors. Per-cell
// failures are logged in the manifest, not fatal. Deterministic for a fixed
// seed regardless of thread count.
NegativeCorpus generate_counterexamples(std::span<const MinedSpec> specs,
                                        const GenerateConfig& cfg,
                                        const sim::LightSchedule& schedule,
                                        const sim::ModelConfig& model);

// Directory layout: metadata.json + manifest.json + trace_XXXXX.csv.
void save_negative_corpus(const NegativeCorpus& corpus, const std::string& dir);
NegativeCorpus load_negative_corpus(const std::string& dir);

// Desk-scale analog of the solver comparison: mean pairwise input distance of
// each solver's accepted candidates on a fixed problem set. Reported, not
// asserted.
struct SolverDiversityReport {
  double cma_mean_pairwise = 0.0;
  double nm_mean_pairwise = 0.0;
  std::size_t problems = 0;
  nlohmann::json to_json() const;
};
SolverDiversityReport compare_solver_diversity(std::span<const FalsificationProblem> problems,
                                               const sim::LightSchedule& schedule,
                                               const sim::ModelConfig& model,
                                               std::uint64_t seed);

}  // namespace drivebound::falsify

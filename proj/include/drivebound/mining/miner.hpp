#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "drivebound/common/error.hpp"
#include "drivebound/mining/template.hpp"
#include "drivebound/stl/trace.hpp"

namespace drivebound::mining {

// Neither bounds endpoint satisfies the whole corpus.
struct InfeasibleError : MiningError {
  using MiningError::MiningError;
};

struct MiningConfig {
  double eps = 0.01;                 // tolerance, in the parameter's natural units
  bool validate_monotone = true;     // 8-point satisfaction sweep across the bounds
  double order_check_fraction = 0.1; // fraction of frontier cells re-run for order invariance
};

struct SearchStats {
  std::size_t endpoint_sweeps = 0;
  std::size_t bisection_sweeps = 0;
  std::size_t probe_sweeps = 0;
};

// Tightest value of `param` (all other parameters bound by `fixed`) such that
// every trace satisfies the instantiated formula, found by monotone bisection.
// Throws MiningError when neither bounds endpoint is feasible or when the
// declared monotonicity is contradicted.
double find_param_1d(const PstlTemplate& tmpl, const std::string& param, const ParamPoint& fixed,
                     std::span<const stl::Trace> traces, const MiningConfig& cfg = {},
                     SearchStats* stats = nullptr);

// Grid over every parameter except `searched` (one list of values per
// parameter); the searched one is bisected per cell.
struct GridSpec {
  std::map<std::string, std::vector<double>> values;
  std::string searched;
};

struct FrontierDiagnostics {
  std::size_t total_cells = 0;
  std::size_t infeasible_cells = 0;   // neither endpoint feasible
  std::size_t no_crossing_cells = 0;  // feasible everywhere, no boundary inside bounds
  std::size_t unverified_cells = 0;   // mined value failed the tightness re-check
  std::size_t order_checked_cells = 0;
  double order_check_max_dev = 0.0;
};

struct ParetoFrontier {
  std::string template_id;
  std::string searched;
  double tolerance = 0.0;
  std::vector<ParamPoint> points;  // each point includes the searched parameter
  FrontierDiagnostics diagnostics;
};

// One frontier point per feasible grid cell; infeasible and boundary-free
// cells are omitted and counted in the diagnostics. Every emitted point is
// re-verified: all traces satisfy it, and an eps-perturbation in the
// tightening direction violates at least one trace.
ParetoFrontier find_frontier(const PstlTemplate& tmpl, const GridSpec& grid,
                             std::span<const stl::Trace> traces, const MiningConfig& cfg = {});

nlohmann::json frontier_to_json(const ParetoFrontier& frontier);
ParetoFrontier frontier_from_json(const nlohmann::json& j);
void write_frontier_csv(const ParetoFrontier& frontier, const std::string& path);

// Evenly spaced values across a parameter's bounds, excluding the endpoints.
std::vector<double> grid_values(const PstlTemplate& tmpl, const std::string& param,
                                std::size_t cells);

}  // namespace drivebound::mining

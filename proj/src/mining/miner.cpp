#include "drivebound/mining/miner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "drivebound/common/error.hpp"
#include "drivebound/stl/robustness.hpp"

namespace drivebound::mining {

namespace {

// Corpus feasibility: every trace satisfies the instantiated template at t=0.
// Uses robustness sign so a zero-margin trace still counts as satisfying.
bool all_satisfy(const stl::Formula& formula, const std::vector<const stl::Trace*>& traces,
                 const ParamPoint& point) {
  for (const stl::Trace* tr : traces) {
    if (stl::robustness(formula, *tr, 0, point) < 0.0) return false;
  }
  return true;
}

struct Search1d {
  double value = 0.0;
  bool bracketed = false;  // true when an interior boundary was bisected
};

Search1d search_1d(const PstlTemplate& tmpl, const std::string& param, const ParamPoint& fixed,
                   const std::vector<const stl::Trace*>& traces, const MiningConfig& cfg,
                   SearchStats* stats) {
  tmpl.validate();
  auto mono_it = tmpl.monotonicity.find(param);
  if (mono_it == tmpl.monotonicity.end()) {
    throw MiningError("'" + param + "' is not a parameter of template '" + tmpl.id + "'");
  }
  for (const auto& p : tmpl.formula.parameters()) {
    if (p != param && !fixed.count(p)) {
      throw MiningError("parameter '" + p + "' is not bound while searching '" + param + "'");
    }
  }
  if (traces.empty()) throw MiningError("empty trace corpus");

  const ParamBounds& bounds = tmpl.bounds.at(param);
  ParamPoint point = fixed;
  SearchStats local;
  auto feasible = [&](double v, std::size_t& counter) {
    point[param] = v;
    ++counter;
    return all_satisfy(tmpl.formula, traces, point);
  };

  // The satisfying end per declared monotonicity; tightening moves away from it.
  const bool increasing = mono_it->second == Monotonicity::Increasing;
  const double sat_end = increasing ? bounds.hi : bounds.lo;
  const double tight_end = increasing ? bounds.lo : bounds.hi;

  const bool sat_ok = feasible(sat_end, local.endpoint_sweeps);
  const bool tight_ok = feasible(tight_end, local.endpoint_sweeps);
  if (!sat_ok) {
    if (tight_ok) {
      throw MiningError("robustness is not monotone as declared in parameter '" + param +
                        "' of template '" + tmpl.id + "'");
    }
    throw InfeasibleError("no feasible endpoint for parameter '" + param + "' of template '" +
                          tmpl.id + "' in [" + std::to_string(bounds.lo) + ", " +
                          std::to_string(bounds.hi) + "]");
  }

  if (cfg.validate_monotone) {
    // Satisfaction must flip at most once across the bounds, in the declared
    // direction.
    constexpr int kProbes = 8;
    bool prev = false;
    int flips = 0;
    bool first = true;
    for (int i = 0; i < kProbes; ++i) {
      double v = bounds.lo + (bounds.hi - bounds.lo) * static_cast<double>(i) / (kProbes - 1);
      bool s = feasible(v, local.probe_sweeps);
      if (!first && s != prev) {
        ++flips;
        bool toward_sat = increasing ? s : !s;  // param just increased
        if (!toward_sat) ++flips;               // wrong-direction flip: force the error
      }
      prev = s;
      first = false;
    }
    if (flips > 1) {
      throw MiningError("non-monotone satisfaction detected in parameter '" + param +
                        "' of template '" + tmpl.id + "'");
    }
  }

  Search1d result;
  if (tight_ok) {
    // Feasible across the whole range: the tightest admissible value is the
    // tightening-direction endpoint itself.
    result.value = tight_end;
    result.bracketed = false;
  } else {
    // Bisect to eps/2 so an eps perturbation of the result is strictly on the
    // violating side of the boundary.
    double good = sat_end, bad = tight_end;
    while (std::fabs(good - bad) > cfg.eps / 2.0) {
      double mid = 0.5 * (good + bad);
      if (feasible(mid, local.bisection_sweeps)) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    result.value = good;
    result.bracketed = true;
  }
  if (stats) *stats = local;
  return result;
}

std::vector<const stl::Trace*> trace_ptrs(std::span<const stl::Trace> traces) {
  std::vector<const stl::Trace*> out;
  out.reserve(traces.size());
  for (const auto& tr : traces) out.push_back(&tr);
  return out;
}

}  // namespace

double find_param_1d(const PstlTemplate& tmpl, const std::string& param, const ParamPoint& fixed,
                     std::span<const stl::Trace> traces, const MiningConfig& cfg,
                     SearchStats* stats) {
  return search_1d(tmpl, param, fixed, trace_ptrs(traces), cfg, stats).value;
}

ParetoFrontier find_frontier(const PstlTemplate& tmpl, const GridSpec& grid,
                             std::span<const stl::Trace> traces, const MiningConfig& cfg) {
  tmpl.validate();
  auto params = tmpl.formula.parameters();
  if (params.size() < 2) {
    throw MiningError("template '" + tmpl.id + "' needs >= 2 parameters for a frontier");
  }
  if (!params.count(grid.searched)) {
    throw MiningError("searched parameter '" + grid.searched + "' is not in template '" +
                      tmpl.id + "'");
  }
  for (const auto& p : params) {
    if (p == grid.searched) continue;
    auto it = grid.values.find(p);
    if (it == grid.values.end() || it->second.empty()) {
      throw MiningError("grid spec must cover parameter '" + p + "'");
    }
  }
  if (grid.values.count(grid.searched)) {
    throw MiningError("grid spec must not cover the searched parameter");
  }

  std::vector<std::string> axes;
  for (const auto& [name, vals] : grid.values) {
    (void)vals;
    axes.push_back(name);
  }
  std::size_t total = 1;
  for (const auto& a : axes) total *= grid.values.at(a).size();
  if (total == 0) throw MiningError("empty grid");

  auto fwd = trace_ptrs(traces);
  std::vector<const stl::Trace*> rev(fwd.rbegin(), fwd.rend());
  const Monotonicity mono = tmpl.monotonicity.at(grid.searched);
  const double tighten = mono == Monotonicity::Increasing ? -cfg.eps : cfg.eps;

  ParetoFrontier frontier;
  frontier.template_id = tmpl.id;
  frontier.searched = grid.searched;
  frontier.tolerance = cfg.eps;
  frontier.diagnostics.total_cells = total;

  const std::size_t order_stride =
      cfg.order_check_fraction > 0.0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(1.0 / cfg.order_check_fraction))
          : 0;

  for (std::size_t cell = 0; cell < total; ++cell) {
    ParamPoint fixed;
    std::size_t rest = cell;
    for (const auto& a : axes) {
      const auto& vals = grid.values.at(a);
      fixed[a] = vals[rest % vals.size()];
      rest /= vals.size();
    }

    Search1d got;
    try {
      got = search_1d(tmpl, grid.searched, fixed, fwd, cfg, nullptr);
    } catch (const InfeasibleError&) {
      ++frontier.diagnostics.infeasible_cells;
      continue;
    }

    ParamPoint point = fixed;
    point[grid.searched] = got.value;
    if (!got.bracketed) {
      // No boundary inside the bounds unless the tightening endpoint sits
      // exactly on it; the perturbation re-check below decides.
      ParamPoint probe = point;
      probe[grid.searched] = got.value + tighten;
      if (all_satisfy(tmpl.formula, fwd, probe)) {
        ++frontier.diagnostics.no_crossing_cells;
        continue;
      }
    } else {
      // Tightness re-check: the point satisfies, the eps-perturbed one must not.
      if (!all_satisfy(tmpl.formula, fwd, point)) {
        ++frontier.diagnostics.unverified_cells;
        continue;
      }
      ParamPoint probe = point;
      probe[grid.searched] = got.value + tighten;
      if (all_satisfy(tmpl.formula, fwd, probe)) {
        ++frontier.diagnostics.unverified_cells;
        continue;
      }
    }

    if (order_stride > 0 && cell % order_stride == 0) {
      // Re-run the search with the corpus traversed in the opposite order; the
      // mined coordinate must agree to 2*eps.
      Search1d again = search_1d(tmpl, grid.searched, fixed, rev, cfg, nullptr);
      double dev = std::fabs(again.value - got.value);
      ++frontier.diagnostics.order_checked_cells;
      frontier.diagnostics.order_check_max_dev =
          std::max(frontier.diagnostics.order_check_max_dev, dev);
      if (dev > 2.0 * cfg.eps) {
        throw MiningError("frontier cell for template '" + tmpl.id +
                          "' is sensitive to evaluation order (dev " + std::to_string(dev) + ")");
      }
    }

    frontier.points.push_back(std::move(point));
  }

  if (frontier.points.empty() && frontier.diagnostics.infeasible_cells == total) {
    throw MiningError("all grid cells infeasible for template '" + tmpl.id + "'");
  }
  return frontier;
}

nlohmann::json frontier_to_json(const ParetoFrontier& frontier) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : frontier.points) pts.push_back(p);
  return nlohmann::json{
      {"template", frontier.template_id},
      {"searched", frontier.searched},
      {"tolerance", frontier.tolerance},
      {"points", pts},
      {"diagnostics",
       {{"total_cells", frontier.diagnostics.total_cells},
        {"infeasible_cells", frontier.diagnostics.infeasible_cells},
        {"no_crossing_cells", frontier.diagnostics.no_crossing_cells},
        {"unverified_cells", frontier.diagnostics.unverified_cells},
        {"order_checked_cells", frontier.diagnostics.order_checked_cells},
        {"order_check_max_dev", frontier.diagnostics.order_check_max_dev}}},
  };
}

ParetoFrontier frontier_from_json(const nlohmann::json& j) {
  ParetoFrontier f;
  f.template_id = j.at("template").get<std::string>();
  f.searched = j.at("searched").get<std::string>();
  f.tolerance = j.at("tolerance").get<double>();
  for (const auto& p : j.at("points")) {
    f.points.push_back(p.get<ParamPoint>());
  }
  const auto& d = j.at("diagnostics");
  f.diagnostics.total_cells = d.value("total_cells", 0u);
  f.diagnostics.infeasible_cells = d.value("infeasible_cells", 0u);
  f.diagnostics.no_crossing_cells = d.value("no_crossing_cells", 0u);
  f.diagnostics.unverified_cells = d.value("unverified_cells", 0u);
  return f;
}

void write_frontier_csv(const ParetoFrontier& frontier, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write frontier CSV '" + path + "'");
  std::vector<std::string> cols;
  if (!frontier.points.empty()) {
    for (const auto& [name, v] : frontier.points.front()) {
      (void)v;
      cols.push_back(name);
    }
  }
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  char buf[40];
  for (const auto& p : frontier.points) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.9g", p.at(cols[i]));
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

std::vector<double> grid_values(const PstlTemplate& tmpl, const std::string& param,
                                std::size_t cells) {
  const auto& b = tmpl.bounds.at(param);
  if (cells == 0) throw ConfigError("grid must have at least one cell");
  std::vector<double> out;
  out.reserve(cells);
  // Cell centers, so degenerate endpoint values don't dominate the frontier.
  for (std::size_t i = 0; i < cells; ++i) {
    out.push_back(b.lo + (b.hi - b.lo) * (static_cast<double>(i) + 0.5) /
                            static_cast<double>(cells));
  }
  return out;
}

}  // namespace drivebound::mining

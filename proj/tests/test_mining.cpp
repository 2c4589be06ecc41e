#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "drivebound/common/error.hpp"
#include "drivebound/mining/miner.hpp"
#include "drivebound/stl/parse.hpp"
#include "drivebound/stl/robustness.hpp"

using namespace drivebound;
using namespace drivebound::mining;
using drivebound::stl::Light;
using drivebound::stl::Trace;

namespace {

// Green-light cruise with given per-sample speeds.
Trace speed_trace(const std::vector<double>& speeds) {
  Trace tr;
  tr.dt = 0.1;
  double d = 250.0;
  for (double v : speeds) {
    tr.d_x.push_back(d);
    tr.v_x.push_back(v);
    tr.t_el.push_back(1.0);
    tr.l_q.push_back(0.0);
    tr.s_tl.push_back(Light::Green);
    tr.u.push_back(0.0);
    d = std::max(0.0, d - v * 0.1);
  }
  return tr;
}

Trace ramp_trace(double v0, double v1, std::size_t n) {
  std::vector<double> speeds;
  for (std::size_t k = 0; k < n; ++k) {
    speeds.push_back(v0 + (v1 - v0) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  return speed_trace(speeds);
}

// Independent oracle: exhaustive scan of the parameter range at half the
// mining resolution, returning the tightest value with every trace satisfied.
double scan_tightest(const PstlTemplate& tmpl, const std::string& param, const ParamPoint& fixed,
                     const std::vector<Trace>& traces, double eps) {
  const auto& b = tmpl.bounds.at(param);
  const bool increasing = tmpl.monotonicity.at(param) == Monotonicity::Increasing;
  double step = eps / 2.0;
  double best = std::numeric_limits<double>::quiet_NaN();
  for (double v = b.lo; v <= b.hi + 1e-12; v += step) {
    ParamPoint p = fixed;
    p[param] = v;
    bool ok = true;
    for (const auto& tr : traces) {
      if (stl::robustness(tmpl.formula, tr, 0, p) < 0.0) {
        ok = false;
        break;
      }
    }
    if (ok) {
      // tightest feasible: smallest v when increasing, largest when decreasing
      if (std::isnan(best)) {
        best = v;
      } else {
        best = increasing ? std::min(best, v) : std::max(best, v);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("builtin templates: structure and canonical instance") {
  auto all = builtin_templates();
  REQUIRE(all.size() == 4);
  for (const auto& t : all) CHECK_NOTHROW(t.validate());

  const auto& vlimit = builtin_template("vlimit");
  CHECK(vlimit.monotonicity.at("nu") == Monotonicity::Increasing);

  const auto& green = builtin_template("green");
  CHECK(green.monotonicity.at("nu") == Monotonicity::Decreasing);

  const auto& red = builtin_template("red");
  stl::Formula inst = red.formula.substitute({{"delta", 19.5}, {"tau", 7.5}, {"nu", 10.0}});
  CHECK(inst.str() ==
        "alw_[0,inf] ((((s_TL == R) and (d_x < 19.5)) and (t_el > 7.5)) => (v_x < 10))");
  CHECK(stl::parse(inst.str()) == inst);

  CHECK_THROWS_AS(builtin_template("bogus"), ConfigError);
}

TEST_CASE("find_param_1d: vlimit equals the corpus speed maximum") {
  std::vector<Trace> corpus;
  corpus.push_back(ramp_trace(10.0, 18.0, 40));
  corpus.push_back(ramp_trace(22.3, 12.0, 35));
  corpus.push_back(ramp_trace(20.0, 25.4, 50));

  const auto& tmpl = builtin_template("vlimit");
  MiningConfig cfg;
  SearchStats stats;
  double nu = find_param_1d(tmpl, "nu", {}, corpus, cfg, &stats);
  CHECK(std::fabs(nu - 25.4) <= 0.01);

  // Bisection sweep budget: ceil(log2((hi-lo)/eps)) + 1.
  double width = tmpl.bounds.at("nu").hi - tmpl.bounds.at("nu").lo;
  auto limit = static_cast<std::size_t>(std::ceil(std::log2(width / cfg.eps))) + 1;
  CHECK(stats.bisection_sweeps <= limit);

  // Independent oracle: exhaustive scan at eps/2.
  double scanned = scan_tightest(tmpl, "nu", {}, corpus, cfg.eps);
  CHECK(std::fabs(nu - scanned) <= cfg.eps);
}

TEST_CASE("find_param_1d: degenerate constant-zero trace pins nu at the lower bound") {
  std::vector<Trace> corpus{speed_trace(std::vector<double>(20, 0.0))};
  double nu = find_param_1d(builtin_template("vlimit"), "nu", {}, corpus);
  CHECK(std::fabs(nu - 0.0) <= 0.01);
}

TEST_CASE("find_param_1d: tightness invariant") {
  std::vector<Trace> corpus;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> vmax(5.0, 28.0);
  for (int i = 0; i < 10; ++i) corpus.push_back(ramp_trace(3.0, vmax(rng), 30));

  const auto& tmpl = builtin_template("vlimit");
  MiningConfig cfg;
  double nu = find_param_1d(tmpl, "nu", {}, corpus, cfg);
  for (const auto& tr : corpus) {
    CHECK(stl::robustness(tmpl.formula, tr, 0, {{"nu", nu}}) >= 0.0);
  }
  bool violated = false;
  for (const auto& tr : corpus) {
    if (stl::robustness(tmpl.formula, tr, 0, {{"nu", nu - cfg.eps}}) < 0.0) violated = true;
  }
  CHECK(violated);
}

TEST_CASE("find_param_1d: error cases") {
  const auto& tmpl = builtin_template("vlimit");
  std::vector<Trace> corpus{speed_trace(std::vector<double>(10, 45.0))};
  // 45 m/s exceeds the nu search range entirely: no feasible endpoint.
  // (Trace validation allows it; v_max is a model-config concern.)
  CHECK_THROWS_AS(find_param_1d(tmpl, "nu", {}, corpus), InfeasibleError);

  std::vector<Trace> ok{speed_trace(std::vector<double>(10, 10.0))};
  CHECK_THROWS_AS(find_param_1d(tmpl, "bogus", {}, ok), MiningError);

  const auto& green = builtin_template("green");
  CHECK_THROWS_AS(find_param_1d(green, "nu", {{"delta", 50.0}}, ok), MiningError);
}

TEST_CASE("find_param_1d: non-monotone declaration is detected") {
  // Flip the declared direction of vlimit's nu; the endpoint logic must name it.
  PstlTemplate t = builtin_template("vlimit");
  t.monotonicity["nu"] = Monotonicity::Decreasing;
  std::vector<Trace> corpus{ramp_trace(5.0, 20.0, 20)};
  try {
    find_param_1d(t, "nu", {}, corpus);
    FAIL("expected MiningError");
  } catch (const MiningError& e) {
    CHECK(std::string(e.what()).find("nu") != std::string::npos);
  }
}

TEST_CASE("find_frontier: single cell reduces to find_param_1d") {
  const auto& green = builtin_template("green");
  std::vector<Trace> corpus{ramp_trace(8.0, 20.0, 60)};

  GridSpec grid;
  grid.searched = "nu";
  grid.values["delta"] = {50.0};
  grid.values["tau"] = {0.5};
  ParetoFrontier f = find_frontier(green, grid, corpus);
  REQUIRE(f.points.size() == 1);

  double direct = find_param_1d(green, "nu", {{"delta", 50.0}, {"tau", 0.5}}, corpus);
  CHECK(f.points[0].at("nu") == doctest::Approx(direct));
}

TEST_CASE("find_frontier: green frontier nu is non-decreasing in delta") {
  // Speeds grow with distance from the intersection in this corpus, so the
  // minimum active speed grows as delta tightens the activation region.
  std::vector<Trace> corpus;
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> v_near(3.0, 6.0);
  std::uniform_real_distribution<double> v_far(15.0, 25.0);
  for (int i = 0; i < 8; ++i) {
    // decelerating approach: fast while far, slow when near
    Trace tr = ramp_trace(v_far(rng), v_near(rng), 80);
    corpus.push_back(tr);
  }

  const auto& green = builtin_template("green");
  GridSpec grid;
  grid.searched = "nu";
  grid.values["delta"] = {20, 40, 60, 80, 100, 120};
  grid.values["tau"] = {0.5};
  ParetoFrontier f = find_frontier(green, grid, corpus);
  REQUIRE(f.points.size() >= 2);

  std::vector<std::pair<double, double>> pts;  // (delta, nu)
  for (const auto& p : f.points) pts.emplace_back(p.at("delta"), p.at("nu"));
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].second >= pts[i - 1].second);
  }

  // Tightness holds at every emitted point.
  for (const auto& p : f.points) {
    for (const auto& tr : corpus) CHECK(stl::robustness(green.formula, tr, 0, p) >= 0.0);
    ParamPoint probe = p;
    probe["nu"] = p.at("nu") + f.tolerance;  // nu is decreasing-monotone: tighten upward
    bool violated = false;
    for (const auto& tr : corpus) {
      if (stl::robustness(green.formula, tr, 0, probe) < 0.0) violated = true;
    }
    CHECK(violated);
  }
}

TEST_CASE("find_frontier: grid validation errors") {
  const auto& green = builtin_template("green");
  std::vector<Trace> corpus{ramp_trace(8.0, 20.0, 30)};
  GridSpec bad;
  bad.searched = "nu";
  bad.values["delta"] = {50.0};  // tau missing
  CHECK_THROWS_AS(find_frontier(green, bad, corpus), MiningError);

  GridSpec vlimit_grid;
  vlimit_grid.searched = "nu";
  CHECK_THROWS_AS(find_frontier(builtin_template("vlimit"), vlimit_grid, corpus), MiningError);
}

TEST_CASE("frontier JSON and CSV emitters") {
  namespace fs = std::filesystem;
  const auto& green = builtin_template("green");
  std::vector<Trace> corpus{ramp_trace(8.0, 20.0, 60)};
  GridSpec grid;
  grid.searched = "nu";
  grid.values["delta"] = {40.0, 80.0};
  grid.values["tau"] = {0.5};
  ParetoFrontier f = find_frontier(green, grid, corpus);

  nlohmann::json j = frontier_to_json(f);
  ParetoFrontier back = frontier_from_json(j);
  CHECK(back.template_id == f.template_id);
  CHECK(back.points == f.points);

  fs::path dir = fs::temp_directory_path() / "db_test_mining";
  fs::create_directories(dir);
  write_frontier_csv(f, (dir / "f.csv").string());
  std::ifstream in(dir / "f.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "delta,nu,tau");
  fs::remove_all(dir);
}

TEST_CASE("grid_values: evenly spaced cell centers inside bounds") {
  const auto& green = builtin_template("green");
  auto vals = grid_values(green, "delta", 10);
  REQUIRE(vals.size() == 10);
  CHECK(vals.front() > green.bounds.at("delta").lo);
  CHECK(vals.back() < green.bounds.at("delta").hi);
  CHECK(vals[1] - vals[0] == doctest::Approx(20.0));
}

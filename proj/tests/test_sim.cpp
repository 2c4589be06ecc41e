#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "drivebound/common/error.hpp"
#include "drivebound/sim/model.hpp"
#include "drivebound/stl/parse.hpp"
#include "drivebound/stl/robustness.hpp"

using namespace drivebound;
using namespace drivebound::sim;
using drivebound::stl::Light;

namespace {

ModelConfig default_cfg() { return ModelConfig{}; }

}  // namespace

TEST_CASE("step: constant velocity advances distance") {
  ModelConfig cfg = default_cfg();
  HybridState s{50.0, 10.0, 0.0, 0.0, Light::Green};
  HybridState n = step(s, 0.0, 0.1, cfg.schedule, cfg);
  CHECK(n.d_x == doctest::Approx(49.0));
  CHECK(n.v_x == doctest::Approx(10.0));
}

TEST_CASE("step: speed clamps at zero under braking") {
  ModelConfig cfg = default_cfg();
  HybridState s{50.0, 0.05, 0.0, 0.0, Light::Green};
  HybridState n = step(s, -6.0, 0.1, cfg.schedule, cfg);
  CHECK(n.v_x == 0.0);
}

TEST_CASE("step: light transition resets the phase clock") {
  ModelConfig cfg = default_cfg();  // green 30 s
  HybridState s{50.0, 0.0, 29.95, 0.0, Light::Green};
  HybridState n = step(s, 0.0, 0.1, cfg.schedule, cfg);
  CHECK(n.s_tl == Light::Yellow);
  CHECK(n.t_el == doctest::Approx(0.05));
}

TEST_CASE("step: queue constant appears on red and is capped by d_x") {
  ModelConfig cfg = default_cfg();
  HybridState s{8.0, 0.0, 29.0, 0.0, Light::Red};
  HybridState n = step(s, 0.0, 0.1, cfg.schedule, cfg);
  CHECK(n.s_tl == Light::Red);
  CHECK(n.l_q == doctest::Approx(std::min(cfg.queue_red, n.d_x)));
}

TEST_CASE("simulate: six control points give 31 samples at 10 Hz") {
  ModelConfig cfg = default_cfg();
  InputSignal in{0.5, {0, 0, 0, 0, 0, 0}};
  HybridState x0{100.0, 5.0, 1.0, 0.0, Light::Green};
  stl::Trace tr = simulate(x0, in, 3.0, 0.1, cfg.schedule, cfg);
  CHECK(tr.size() == 31);
  CHECK(in.values.size() == 6);
}

TEST_CASE("simulate: zero input from rest keeps distance constant") {
  ModelConfig cfg = default_cfg();
  InputSignal in{0.5, {0, 0, 0, 0, 0, 0}};
  HybridState x0{100.0, 0.0, 1.0, 0.0, Light::Green};
  stl::Trace tr = simulate(x0, in, 3.0, 0.1, cfg.schedule, cfg);
  for (double d : tr.d_x) CHECK(d == doctest::Approx(100.0));
}

TEST_CASE("simulate: input shorter than horizon is an error") {
  ModelConfig cfg = default_cfg();
  InputSignal in{0.5, {0, 0, 0}};
  HybridState x0{100.0, 0.0, 1.0, 0.0, Light::Green};
  CHECK_THROWS_AS(simulate(x0, in, 3.0, 0.1, cfg.schedule, cfg), ConfigError);
}

TEST_CASE("simulate: Fig-6-style run falsifies the red-light instance") {
  // Constant speed toward a long-held red light crosses 19.5 m above 10 m/s.
  ModelConfig cfg = default_cfg();
  InputSignal in{0.5, {0, 0, 0, 0, 0, 0}};
  HybridState x0{25.0, 14.0, 7.0, std::min(cfg.queue_red, 25.0), Light::Red};
  stl::Trace tr = simulate(x0, in, 3.0, 0.1, cfg.schedule, cfg);

  stl::Formula phi_r = stl::parse(
      "alw_[0,inf] ((((s_TL == R) and (d_x < 19.5)) and (t_el > 7.5)) => (v_x < 10))");
  CHECK_FALSE(stl::satisfies(phi_r, tr, 0));
  CHECK(stl::robustness(phi_r, tr, 0) < 0.0);
}

TEST_CASE("simulate: determinism and Table-1 range preservation") {
  ModelConfig cfg = default_cfg();
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uin(-10.0, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    InputSignal in{0.5, {}};
    for (int i = 0; i < 12; ++i) in.values.push_back(uin(rng));
    HybridState x0{150.0, 20.0, 2.0, 0.0, Light::Green};
    stl::Trace a = simulate(x0, in, 6.0, 0.1, cfg.schedule, cfg);
    stl::Trace b = simulate(x0, in, 6.0, 0.1, cfg.schedule, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a.v_x[k] == b.v_x[k]);  // bit-identical
      CHECK(a.d_x[k] == b.d_x[k]);
      CHECK(a.v_x[k] >= 0.0);
      CHECK(a.v_x[k] <= cfg.v_max);
      CHECK(a.d_x[k] >= 0.0);
      CHECK(a.l_q[k] >= 0.0);
      CHECK(a.l_q[k] <= a.d_x[k] + 1e-12);
    }
    CHECK_NOTHROW(a.validate());
  }
}

TEST_CASE("simulate: light clock continuity and kinematic consistency") {
  ModelConfig cfg = default_cfg();
  InputSignal in{0.5, std::vector<double>(80, 1.5)};
  HybridState x0{290.0, 3.0, 28.0, 0.0, Light::Green};
  stl::Trace tr = simulate(x0, in, 40.0, 0.1, cfg.schedule, cfg);
  for (std::size_t k = 1; k < tr.size(); ++k) {
    if (tr.s_tl[k] == tr.s_tl[k - 1]) {
      CHECK(tr.t_el[k] == doctest::Approx(tr.t_el[k - 1] + 0.1).epsilon(1e-9));
    } else {
      CHECK(tr.t_el[k] < 0.1);
    }
    bool interior = tr.v_x[k] > 0.0 && tr.v_x[k] < cfg.v_max;
    bool prev_interior = tr.v_x[k - 1] > 0.0 && tr.v_x[k - 1] < cfg.v_max;
    if (interior && prev_interior) {
      CHECK((tr.v_x[k] - tr.v_x[k - 1]) / 0.1 == doctest::Approx(tr.u[k - 1]).epsilon(1e-9));
    }
  }
}

TEST_CASE("simulate: out-of-range input is clamped and counted") {
  ModelConfig cfg = default_cfg();
  InputSignal in{0.5, {-20.0, 0.0, 5.0, 0.0, 0.0, 0.0}};
  HybridState x0{100.0, 20.0, 1.0, 0.0, Light::Green};
  SimStats stats;
  stl::Trace tr = simulate(x0, in, 3.0, 0.1, cfg.schedule, cfg, &stats);
  CHECK(stats.clamped_inputs > 0);
  CHECK_NOTHROW(tr.validate());
}

TEST_CASE("model config JSON round-trip and validation") {
  ModelConfig cfg = default_cfg();
  cfg.queue_red = 9.0;
  cfg.schedule.yellow = 4.0;
  ModelConfig back = ModelConfig::from_json(cfg.to_json());
  CHECK(back.queue_red == 9.0);
  CHECK(back.schedule.yellow == 4.0);

  nlohmann::json bad = cfg.to_json();
  bad["schedule"]["green"] = -1.0;
  CHECK_THROWS_AS(ModelConfig::from_json(bad), ConfigError);
}

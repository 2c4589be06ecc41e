#include "drivebound/synth/generate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "drivebound/common/error.hpp"
#include "drivebound/common/rng.hpp"
#include "drivebound/stl/robustness.hpp"

namespace drivebound::synth {

namespace {

double sample(const Range& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(r.lo, r.hi);
  return dist(rng);
}

nlohmann::json range_json(const Range& r) { return nlohmann::json{r.lo, r.hi}; }
Range range_from(const nlohmann::json& j) { return Range{j.at(0), j.at(1)}; }

// Braking command that brings the vehicle to rest `target` metres before the
// line. Holding u = -v^2/(2*d_go) keeps the required deceleration constant
// along the resulting trajectory.
double brake_toward(double d_x, double v, double target, double comfort, double engage_frac) {
  const double buffer = 0.7;
  double d_go = d_x - target - buffer;
  if (v < 0.2) return -comfort;  // hold at rest
  if (d_go < 0.3) {
    // Too close to stop where intended: emergency braking.
    return -std::min(10.0, std::max(comfort * 2.5, v * v));
  }
  double a_req = v * v / (2.0 * d_go);
  if (a_req >= engage_frac * comfort) return -std::min(a_req, 10.0);
  return 0.0;  // coast until braking is warranted
}

}  // namespace

double driver_accel(const DriverProfile& profile, const sim::HybridState& state,
                    stl::Light seen_light, const sim::ModelConfig& cfg) {
  double track = profile.speed_gain * (profile.desired_speed - state.v_x);
  track = std::clamp(track, -profile.comfort_decel, 2.0);

  switch (seen_light) {
    case stl::Light::Green:
      return track;
    case stl::Light::Red: {
      double stop_at = std::min(cfg.queue_red, state.d_x);
      double u = brake_toward(state.d_x, state.v_x, stop_at, profile.comfort_decel, 0.6);
      return u == 0.0 ? std::min(track, 0.5) : u;
    }
    case stl::Light::Yellow: {
      double stopping = profile.yellow_stop_margin * state.v_x * state.v_x /
                        (2.0 * profile.comfort_decel);
      if (stopping < state.d_x) {
        double u = brake_toward(state.d_x, state.v_x, 1.0, profile.comfort_decel, 0.6);
        return u == 0.0 ? std::min(track, 0.0) : u;
      }
      return 0.0;  // committed to passing: maintain speed
    }
  }
  return track;
}

std::map<std::string, mining::ParamPoint> GeneratorConfig::generous_valuations() const {
  return {
      {"vlimit", {{"nu", 28.0}}},
      {"green", {{"delta", 100.0}, {"tau", 8.0}, {"nu", 0.5}}},
      {"yellow", {{"delta", 10.0}, {"nu0", 20.0}, {"nu", 0.5}}},
      {"red", {{"delta", 25.0}, {"tau", 10.0}, {"nu", 12.0}}},
  };
}

nlohmann::json GeneratorConfig::to_json() const {
  nlohmann::json gv;
  for (const auto& [id, point] : generous_valuations()) gv[id] = point;
  return nlohmann::json{
      {"desired_speed", range_json(desired_speed)},
      {"speed_gain", range_json(speed_gain)},
      {"comfort_decel", range_json(comfort_decel)},
      {"yellow_stop_margin", range_json(yellow_stop_margin)},
      {"reaction_delay", range_json(reaction_delay)},
      {"noise_std", range_json(noise_std)},
      {"d0", range_json(d0)},
      {"accel_cap", accel_cap},
      {"seed", seed},
      {"resample_cap", resample_cap},
      {"generous_valuations", gv},
  };
}

GeneratorConfig GeneratorConfig::from_json(const nlohmann::json& j) {
  GeneratorConfig g;
  if (j.contains("desired_speed")) g.desired_speed = range_from(j["desired_speed"]);
  if (j.contains("speed_gain")) g.speed_gain = range_from(j["speed_gain"]);
  if (j.contains("comfort_decel")) g.comfort_decel = range_from(j["comfort_decel"]);
  if (j.contains("yellow_stop_margin")) g.yellow_stop_margin = range_from(j["yellow_stop_margin"]);
  if (j.contains("reaction_delay")) g.reaction_delay = range_from(j["reaction_delay"]);
  if (j.contains("noise_std")) g.noise_std = range_from(j["noise_std"]);
  if (j.contains("d0")) g.d0 = range_from(j["d0"]);
  g.accel_cap = j.value("accel_cap", g.accel_cap);
  g.seed = j.value("seed", g.seed);
  g.resample_cap = j.value("resample_cap", g.resample_cap);
  return g;
}

namespace {

stl::Trace roll_out(const DriverProfile& profile, const sim::HybridState& x0,
                    const sim::LightSchedule& schedule, double horizon,
                    const sim::ModelConfig& cfg, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, 1.0);
  auto steps = static_cast<std::size_t>(std::llround(horizon / cfg.dt));
  double clock0 = schedule.clock_of(x0.s_tl, x0.t_el);

  stl::Trace tr;
  tr.dt = cfg.dt;
  tr.label = stl::TraceLabel::Human;
  sim::HybridState s = x0;
  for (std::size_t k = 0; k <= steps; ++k) {
    double t = static_cast<double>(k) * cfg.dt;
    auto [seen, seen_tel] = schedule.phase_at(clock0 + t - profile.reaction_delay);
    (void)seen_tel;
    double u = driver_accel(profile, s, seen, cfg);
    if (profile.noise_std > 0.0) {
      double eps = noise(rng) * profile.noise_std;
      u += std::clamp(eps, -2.0 * profile.noise_std, 2.0 * profile.noise_std);
    }
    u = std::clamp(u, cfg.u_phys_min, cfg.u_phys_max);
    tr.d_x.push_back(s.d_x);
    tr.v_x.push_back(s.v_x);
    tr.t_el.push_back(s.t_el);
    tr.l_q.push_back(s.l_q);
    tr.s_tl.push_back(s.s_tl);
    tr.u.push_back(u);
    if (k < steps) s = sim::step(s, u, cfg.dt, schedule, cfg);
  }
  return tr;
}

bool satisfies_generous(const stl::Trace& tr, const GeneratorConfig& gen) {
  for (const auto& [id, point] : gen.generous_valuations()) {
    const auto& tmpl = mining::builtin_template(id);
    if (stl::robustness(tmpl.formula, tr, 0, point) < 0.0) return false;
    if (!stl::satisfies(tmpl.formula, tr, 0, point)) return false;
  }
  return true;
}

}  // namespace

std::vector<stl::Trace> generate_corpus(std::size_t n, const GeneratorConfig& gen,
                                        const sim::LightSchedule& schedule, double horizon,
                                        const sim::ModelConfig& cfg) {
  if (n == 0) throw ConfigError("corpus size must be >= 1");
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");

  std::vector<stl::Trace> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::mt19937_64 rng = make_rng(gen.seed, i);
    bool accepted = false;
    for (int attempt = 0; attempt < gen.resample_cap; ++attempt) {
      DriverProfile profile;
      profile.desired_speed = sample(gen.desired_speed, rng);
      profile.speed_gain = sample(gen.speed_gain, rng);
      profile.comfort_decel = sample(gen.comfort_decel, rng);
      profile.yellow_stop_margin = sample(gen.yellow_stop_margin, rng);
      profile.reaction_delay = sample(gen.reaction_delay, rng);
      profile.noise_std = sample(gen.noise_std, rng);
      profile.rng_seed = mix_seed(gen.seed, i);

      sim::LightSchedule sched = schedule;
      std::uniform_real_distribution<double> offset(0.0, schedule.cycle());
      sched.phase_offset = offset(rng);
      auto [light0, t_el0] = sched.phase_at(0.0);

      sim::HybridState x0;
      x0.d_x = std::min(sample(gen.d0, rng), cfg.d_max);
      x0.s_tl = light0;
      x0.t_el = t_el0;
      std::uniform_real_distribution<double> vfrac(0.4, 1.0);
      double v0 = vfrac(rng) * profile.desired_speed;
      if (light0 == stl::Light::Red) {
        // Start at a speed the profile can comfortably brake away.
        double stoppable = std::sqrt(2.0 * profile.comfort_decel *
                                     std::max(x0.d_x - cfg.queue_red - 2.0, 0.5));
        v0 = std::min(v0, 0.95 * stoppable);
      } else {
        v0 = std::max(v0, 2.0);
      }
      x0.v_x = std::clamp(v0, 0.0, cfg.v_max);
      x0.l_q = light0 == stl::Light::Red ? std::min(cfg.queue_red, x0.d_x) : 0.0;

      stl::Trace tr = roll_out(profile, x0, sched, horizon, cfg, rng);
      if (satisfies_generous(tr, gen)) {
        out.push_back(std::move(tr));
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw Error("resample cap (" + std::to_string(gen.resample_cap) +
                  ") exceeded while generating trace " + std::to_string(i + 1) +
                  "; the profile/schedule configuration cannot satisfy the built-in templates");
    }
  }
  return out;
}

}  // namespace drivebound::synth

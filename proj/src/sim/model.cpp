#include "drivebound/sim/model.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "drivebound/common/error.hpp"

namespace drivebound::sim {

void LightSchedule::validate() const {
  if (!(green > 0.0) || !(yellow > 0.0) || !(red > 0.0)) {
    throw ConfigError("light schedule durations must be positive");
  }
  if (!std::isfinite(phase_offset)) throw ConfigError("phase_offset must be finite");
}

std::pair<stl::Light, double> LightSchedule::phase_at(double t) const {
  double s = std::fmod(phase_offset + t, cycle());
  if (s < 0.0) s += cycle();
  if (s < green) return {stl::Light::Green, s};
  if (s < green + yellow) return {stl::Light::Yellow, s - green};
  return {stl::Light::Red, s - green - yellow};
}

double LightSchedule::clock_of(stl::Light light, double t_el) const {
  double start = 0.0;
  switch (light) {
    case stl::Light::Green: start = 0.0; break;
    case stl::Light::Yellow: start = green; break;
    case stl::Light::Red: start = green + yellow; break;
  }
  return start + t_el - phase_offset;
}

void ModelConfig::validate() const {
  if (!(d_max > 0.0) || !(v_max > 0.0)) throw ConfigError("d_max/v_max must be positive");
  if (queue_red < 0.0) throw ConfigError("queue_red must be non-negative");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(u_phys_min < u_phys_max)) throw ConfigError("invalid physical input range");
  if (!(u_fals_min < u_fals_max)) throw ConfigError("invalid falsification input range");
  if (u_fals_min < u_phys_min || u_fals_max > u_phys_max) {
    throw ConfigError("falsification range must lie within the physical range");
  }
  schedule.validate();
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  cfg.d_max = j.value("d_max", cfg.d_max);
  cfg.v_max = j.value("v_max", cfg.v_max);
  cfg.queue_red = j.value("queue_red", cfg.queue_red);
  cfg.dt = j.value("dt", cfg.dt);
  if (j.contains("u_phys")) {
    cfg.u_phys_min = j.at("u_phys").at(0).get<double>();
    cfg.u_phys_max = j.at("u_phys").at(1).get<double>();
  }
  if (j.contains("u_falsify")) {
    cfg.u_fals_min = j.at("u_falsify").at(0).get<double>();
    cfg.u_fals_max = j.at("u_falsify").at(1).get<double>();
  }
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    cfg.schedule.green = s.value("green", cfg.schedule.green);
    cfg.schedule.yellow = s.value("yellow", cfg.schedule.yellow);
    cfg.schedule.red = s.value("red", cfg.schedule.red);
    cfg.schedule.phase_offset = s.value("phase_offset", cfg.schedule.phase_offset);
  }
  cfg.validate();
  return cfg;
}

nlohmann::json ModelConfig::to_json() const {
  return nlohmann::json{
      {"d_max", d_max},
      {"v_max", v_max},
      {"queue_red", queue_red},
      {"dt", dt},
      {"u_phys", {u_phys_min, u_phys_max}},
      {"u_falsify", {u_fals_min, u_fals_max}},
      {"schedule",
       {{"green", schedule.green},
        {"yellow", schedule.yellow},
        {"red", schedule.red},
        {"phase_offset", schedule.phase_offset}}},
  };
}

void HybridState::validate(const ModelConfig& cfg, const LightSchedule& schedule) const {
  if (d_x < 0.0 || d_x > cfg.d_max) throw ConfigError("d_x outside [0, d_max]");
  if (v_x < 0.0 || v_x > cfg.v_max) throw ConfigError("v_x outside [0, v_max]");
  if (t_el < 0.0) throw ConfigError("t_el must be non-negative");
  if (l_q < 0.0 || l_q > d_x + 1e-9) throw ConfigError("l_q outside [0, d_x]");
  double phase = s_tl == stl::Light::Green    ? schedule.green
                 : s_tl == stl::Light::Yellow ? schedule.yellow
                                              : schedule.red;
  if (t_el >= phase) throw ConfigError("t_el exceeds the current phase duration");
  if (s_tl != stl::Light::Red && l_q != 0.0) throw ConfigError("l_q must be 0 on green/yellow");
}

double InputSignal::at(double t) const {
  if (values.empty()) throw ConfigError("empty input signal");
  auto idx = static_cast<std::size_t>(std::max(0.0, std::floor(t / segment_duration + 1e-9)));
  return values[std::min(idx, values.size() - 1)];
}

HybridState step(const HybridState& state, double u, double dt, const LightSchedule& schedule,
                 const ModelConfig& cfg) {
  double uc = std::clamp(u, cfg.u_phys_min, cfg.u_phys_max);
  HybridState next;
  next.d_x = std::max(0.0, state.d_x - state.v_x * dt);
  next.v_x = std::clamp(state.v_x + uc * dt, 0.0, cfg.v_max);
  auto [light, t_el] = schedule.phase_at(schedule.clock_of(state.s_tl, state.t_el) + dt);
  next.s_tl = light;
  next.t_el = t_el;
  next.l_q = light == stl::Light::Red ? std::min(cfg.queue_red, next.d_x) : 0.0;
  return next;
}

stl::Trace simulate(const HybridState& x0, const InputSignal& input, double horizon, double dt,
                    const LightSchedule& schedule, const ModelConfig& cfg, SimStats* stats) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(horizon >= 0.0)) throw ConfigError("horizon must be non-negative");
  if (input.duration() + 1e-9 < horizon) {
    throw ConfigError("input signal (" + std::to_string(input.duration()) +
                      " s) shorter than horizon (" + std::to_string(horizon) + " s)");
  }
  x0.validate(cfg, schedule);

  auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  stl::Trace tr;
  tr.dt = dt;
  HybridState s = x0;
  for (std::size_t k = 0; k <= steps; ++k) {
    double u = input.at(static_cast<double>(k) * dt);
    double uc = std::clamp(u, cfg.u_phys_min, cfg.u_phys_max);
    if (stats && uc != u) ++stats->clamped_inputs;
    tr.d_x.push_back(s.d_x);
    tr.v_x.push_back(s.v_x);
    tr.t_el.push_back(s.t_el);
    tr.l_q.push_back(s.l_q);
    tr.s_tl.push_back(s.s_tl);
    tr.u.push_back(uc);
    if (k < steps) s = step(s, u, dt, schedule, cfg);
  }
  return tr;
}

}  // namespace drivebound::sim

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "drivebound/stl/trace.hpp"

namespace drivebound::sim {

// Fixed-cycle light timing: green -> yellow -> red -> green.
struct LightSchedule {
  double green = 30.0;
  double yellow = 3.5;
  double red = 30.0;
  double phase_offset = 0.0;

  double cycle() const { return green + yellow + red; }
  void validate() const;

  // Light state and elapsed-phase time at schedule clock `t` (offset applied).
  std::pair<stl::Light, double> phase_at(double t) const;

  // Schedule clock that phase_at maps back to (light, t_el).
  double clock_of(stl::Light light, double t_el) const;
};

struct ModelConfig {
  double d_max = 300.0;
  double v_max = 30.0;
  double queue_red = 12.0;  // queue estimate shown during red
  double dt = 0.1;
  double u_phys_min = -10.0;
  double u_phys_max = 3.0;
  double u_fals_min = -6.0;  // falsification input range U
  double u_fals_max = 3.0;
  LightSchedule schedule;

  void validate() const;
  static ModelConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct HybridState {
  double d_x = 100.0;
  double v_x = 0.0;
  double t_el = 0.0;
  double l_q = 0.0;
  stl::Light s_tl = stl::Light::Green;

  // Table-range check; t_el must also be consistent with the schedule phase.
  void validate(const ModelConfig& cfg, const LightSchedule& schedule) const;
};

// Piecewise-constant acceleration, one value per fixed-duration segment.
struct InputSignal {
  double segment_duration = 0.5;
  std::vector<double> values;

  double duration() const { return segment_duration * static_cast<double>(values.size()); }
  double at(double t) const;
};

struct SimStats {
  std::size_t clamped_inputs = 0;
};

// One forward-Euler step. Out-of-range inputs are clamped, never rejected.
HybridState step(const HybridState& state, double u, double dt, const LightSchedule& schedule,
                 const ModelConfig& cfg);

// Samples the closed interval [0, horizon] at period dt (horizon/dt + 1 rows).
// Throws ConfigError when the input signal does not cover the horizon.
stl::Trace simulate(const HybridState& x0, const InputSignal& input, double horizon, double dt,
                    const LightSchedule& schedule, const ModelConfig& cfg,
                    SimStats* stats = nullptr);

}  // namespace drivebound::sim

#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "drivebound/mining/template.hpp"
#include "drivebound/sim/model.hpp"
#include "drivebound/stl/trace.hpp"

namespace drivebound::synth {

// Rule-based longitudinal driver: tracks a desired speed under green, brakes
// to the queue under red, and passes or stops under yellow depending on the
// comfortable stopping distance. A stand-in for naturalistic positive data.
struct DriverProfile {
  double desired_speed = 15.0;      // m/s
  double speed_gain = 0.5;          // 1/s, proportional speed tracking
  double comfort_decel = 3.0;       // m/s^2, preferred braking strength
  double yellow_stop_margin = 1.2;  // scales the stop-or-pass distance test
  double reaction_delay = 0.4;      // s, light perception lag
  double noise_std = 0.15;          // m/s^2, clipped Gaussian input noise
  std::uint64_t rng_seed = 0;
};

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

struct GeneratorConfig {
  Range desired_speed{10.0, 24.0};
  Range speed_gain{0.3, 0.8};
  Range comfort_decel{2.0, 4.0};
  Range yellow_stop_margin{1.0, 1.4};
  Range reaction_delay{0.2, 0.8};
  Range noise_std{0.03, 0.25};
  Range d0{40.0, 260.0};
  double accel_cap = 2.0;  // comfortable forward acceleration
  std::uint64_t seed = 1;
  int resample_cap = 20;  // rejection-sampling attempts per trace

  // Generous template valuations every emitted trace must satisfy.
  std::map<std::string, mining::ParamPoint> generous_valuations() const;

  nlohmann::json to_json() const;
  static GeneratorConfig from_json(const nlohmann::json& j);
};

// n labeled-human traces at cfg.dt over the given horizon; each trace draws
// its own profile, initial condition and light phase from a per-trace RNG
// stream. Throws Error when the resample cap is exceeded and ConfigError for
// n == 0.
std::vector<stl::Trace> generate_corpus(std::size_t n, const GeneratorConfig& gen,
                                        const sim::LightSchedule& schedule, double horizon,
                                        const sim::ModelConfig& cfg);

// Closed-loop acceleration command for one step (before noise).
double driver_accel(const DriverProfile& profile, const sim::HybridState& state,
                    stl::Light seen_light, const sim::ModelConfig& cfg);

}  // namespace drivebound::synth

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drivebound/stl/formula.hpp"

namespace drivebound::stl {

// Hard acceleration envelope of the vehicle; traces outside it are rejected.
inline constexpr double kPhysicalDecelLimit = -10.0;
inline constexpr double kPhysicalAccelLimit = 3.0;

enum class TraceLabel { Human, NonHuman };

std::string_view label_text(TraceLabel l);
std::optional<TraceLabel> label_from_text(std::string_view s);

// Uniformly sampled vehicle/intersection signals. Sample k sits at time
// t0 + k*dt; all channels have equal length.
struct Trace {
  double dt = 0.1;
  double t0 = 0.0;
  std::vector<double> d_x;   // distance to intersection [m]
  std::vector<double> v_x;   // speed [m/s]
  std::vector<double> t_el;  // time since last light change [s]
  std::vector<double> l_q;   // queue length [m]
  std::vector<double> u;     // acceleration input [m/s^2]
  std::vector<Light> s_tl;   // light state
  std::optional<TraceLabel> label;

  std::size_t size() const { return v_x.size(); }
  double duration() const { return size() > 1 ? (size() - 1) * dt : 0.0; }
  double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }

  // Numeric channel lookup by grammar name; throws EvalError for s_TL or
  // unknown names.
  std::span<const double> channel(std::string_view name) const;

  // Checks equal channel lengths, dt > 0 and the physical ranges
  // (v_x >= 0, d_x >= 0, t_el >= 0, l_q in [0, d_x], u within the hard
  // acceleration envelope). Throws IoError on violation.
  void validate() const;
};

bool is_signal_name(std::string_view name);

// CSV format: header `t,d_x,v_x,t_el,l_q,s_TL,u`, one row per sample,
// s_TL one of G|Y|R, constant dt inferred from the first two timestamps and
// validated against every row to 1e-9 s.
Trace read_trace_csv(const std::string& path);
void write_trace_csv(const Trace& trace, const std::string& path);

}  // namespace drivebound::stl

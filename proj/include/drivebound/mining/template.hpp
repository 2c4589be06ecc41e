#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "drivebound/stl/formula.hpp"

namespace drivebound::mining {

// Direction in which robustness moves as the parameter grows.
enum class Monotonicity { Increasing, Decreasing };

struct ParamBounds {
  double lo = 0.0;
  double hi = 1.0;
};

using ParamPoint = std::map<std::string, double>;

struct PstlTemplate {
  std::string id;
  stl::Formula formula;
  std::map<std::string, Monotonicity> monotonicity;
  std::map<std::string, ParamBounds> bounds;
  std::string default_search;  // parameter the frontier sweep bisects by default

  // Every formula parameter must have exactly one monotonicity and bounds
  // entry (and vice versa), with lo < hi.
  void validate() const;
};

// The four built-in traffic-rule templates: vlimit(nu), green(delta,tau,nu),
// yellow(delta,nu0,nu) and red(delta,tau,nu).
std::vector<PstlTemplate> builtin_templates();
const PstlTemplate& builtin_template(std::string_view id);

}  // namespace drivebound::mining

#include "drivebound/mining/template.hpp"

#include "drivebound/common/error.hpp"
#include "drivebound/stl/parse.hpp"

namespace drivebound::mining {

void PstlTemplate::validate() const {
  auto params = formula.parameters();
  if (monotonicity.size() != params.size() || bounds.size() != params.size()) {
    throw ConfigError("template '" + id + "': parameter metadata does not match formula");
  }
  for (const auto& p : params) {
    if (!monotonicity.count(p)) {
      throw ConfigError("template '" + id + "': missing monotonicity for '" + p + "'");
    }
    auto it = bounds.find(p);
    if (it == bounds.end()) {
      throw ConfigError("template '" + id + "': missing bounds for '" + p + "'");
    }
    if (!(it->second.lo < it->second.hi)) {
      throw ConfigError("template '" + id + "': bounds must satisfy lo < hi for '" + p + "'");
    }
  }
  if (!default_search.empty() && !params.count(default_search)) {
    throw ConfigError("template '" + id + "': default_search is not a parameter");
  }
}

std::vector<PstlTemplate> builtin_templates() {
  std::vector<PstlTemplate> out;

  // Never exceed the (mined) speed limit. Robustness nu - max v_x grows with nu.
  {
    PstlTemplate t;
    t.id = "vlimit";
    t.formula = stl::parse("param nu; alw_[0,inf] (v_x < nu)");
    t.monotonicity = {{"nu", Monotonicity::Increasing}};
    t.bounds = {{"nu", {0.0, 40.0}}};
    t.default_search = "nu";
    t.validate();
    out.push_back(std::move(t));
  }

  // Green: far from the intersection under a long-standing green light, keep
  // moving faster than nu. Tightening nu shrinks the consequent margin.
  {
    PstlTemplate t;
    t.id = "green";
    t.formula = stl::parse(
        "param delta, nu, tau; "
        "alw_[0,inf] ((((s_TL == G) and (d_x > delta)) and (t_el > tau)) => (v_x > nu))");
    t.monotonicity = {{"delta", Monotonicity::Increasing},
                      {"tau", Monotonicity::Increasing},
                      {"nu", Monotonicity::Decreasing}};
    t.bounds = {{"delta", {0.0, 200.0}}, {"tau", {0.0, 20.0}}, {"nu", {0.0, 40.0}}};
    t.default_search = "nu";
    t.validate();
    out.push_back(std::move(t));
  }

  // Yellow: a fast vehicle far from the line that has registered the light
  // change (fixed 0.5 s recognition delay) commits to passing for 3 s.
  {
    PstlTemplate t;
    t.id = "yellow";
    t.formula = stl::parse(
        "param delta, nu, nu0; "
        "alw_[0,inf] (((((s_TL == Y) and (d_x > delta)) and (v_x > nu0)) and (t_el > 0.5)) "
        "=> alw_[0,3] (v_x > nu))");
    t.monotonicity = {{"delta", Monotonicity::Increasing},
                      {"nu0", Monotonicity::Increasing},
                      {"nu", Monotonicity::Decreasing}};
    t.bounds = {{"delta", {0.0, 200.0}}, {"nu0", {0.0, 40.0}}, {"nu", {0.0, 40.0}}};
    t.default_search = "nu";
    t.validate();
    out.push_back(std::move(t));
  }

  // Red: close to the intersection under a long-standing red light, drive
  // slower than nu.
  {
    PstlTemplate t;
    t.id = "red";
    t.formula = stl::parse(
        "param delta, nu, tau; "
        "alw_[0,inf] ((((s_TL == R) and (d_x < delta)) and (t_el > tau)) => (v_x < nu))");
    t.monotonicity = {{"delta", Monotonicity::Decreasing},
                      {"tau", Monotonicity::Increasing},
                      {"nu", Monotonicity::Increasing}};
    t.bounds = {{"delta", {0.0, 300.0}}, {"tau", {0.0, 20.0}}, {"nu", {0.0, 40.0}}};
    t.default_search = "nu";
    t.validate();
    out.push_back(std::move(t));
  }

  return out;
}

const PstlTemplate& builtin_template(std::string_view id) {
  static const std::vector<PstlTemplate> all = builtin_templates();
  for (const auto& t : all) {
    if (t.id == id) return t;
  }
  throw ConfigError("unknown template '" + std::string(id) +
                    "' (expected vlimit|green|yellow|red)");
}

}  // namespace drivebound::mining

#include "drivebound/stl/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drivebound/common/error.hpp"

namespace drivebound::stl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double resolve_rhs(const Rhs& rhs, const Bindings& bindings) {
  if (rhs.is_number()) return rhs.number_value();
  auto it = bindings.find(rhs.parameter_name());
  if (it == bindings.end()) {
    throw EvalError("unbound parameter '" + rhs.parameter_name() + "'");
  }
  return it->second;
}

double pred_robustness(const Formula& f, const Trace& trace, std::size_t t,
                       const Bindings& bindings) {
  if (f.rhs().is_label()) {
    if (f.signal() != "s_TL") throw EvalError("label predicate on numeric signal");
    if (f.cmp() != Cmp::Eq) throw EvalError("label predicate requires '=='");
    return trace.s_tl[t] == f.rhs().label_value() ? kInf : -kInf;
  }
  double s = trace.channel(f.signal())[t];
  double c = resolve_rhs(f.rhs(), bindings);
  switch (f.cmp()) {
    case Cmp::Lt:
    case Cmp::Le:
      return c - s;
    case Cmp::Gt:
    case Cmp::Ge:
      return s - c;
    case Cmp::Eq:
      return -std::fabs(s - c);
  }
  throw EvalError("corrupt predicate");
}

bool pred_satisfies(const Formula& f, const Trace& trace, std::size_t t,
                    const Bindings& bindings) {
  if (f.rhs().is_label()) {
    if (f.signal() != "s_TL") throw EvalError("label predicate on numeric signal");
    if (f.cmp() != Cmp::Eq) throw EvalError("label predicate requires '=='");
    return trace.s_tl[t] == f.rhs().label_value();
  }
  double s = trace.channel(f.signal())[t];
  double c = resolve_rhs(f.rhs(), bindings);
  switch (f.cmp()) {
    case Cmp::Lt: return s < c;
    case Cmp::Le: return s <= c;
    case Cmp::Gt: return s > c;
    case Cmp::Ge: return s >= c;
    case Cmp::Eq: return s == c;
  }
  throw EvalError("corrupt predicate");
}

}  // namespace

SampleWindow sample_window(const Trace& trace, std::size_t t, double lo, double hi) {
  const std::size_t n = trace.size();
  if (t >= n) throw EvalError("evaluation index " + std::to_string(t) + " outside trace");
  const double dt = trace.dt;
  // Tolerant rounding so interval endpoints landing on sample times are kept.
  std::size_t first = t + static_cast<std::size_t>(std::max(0.0, std::ceil(lo / dt - 1e-9)));
  std::size_t last;
  if (std::isinf(hi)) {
    last = n - 1;
  } else {
    double steps = std::floor(hi / dt + 1e-9);
    last = t + static_cast<std::size_t>(std::max(0.0, steps));
    last = std::min(last, n - 1);
  }
  if (first > last || first >= n) {
    throw EvalError("empty evaluation window [" + format_number(lo) + "," + format_number(hi) +
                    "] at sample " + std::to_string(t) +
                    " (no samples inside, or interval beyond trace end)");
  }
  return {first, last};
}

double robustness(const Formula& phi, const Trace& trace, std::size_t t,
                  const Bindings& bindings) {
  switch (phi.kind()) {
    case Formula::Kind::True:
      return kInf;
    case Formula::Kind::Pred:
      if (t >= trace.size()) throw EvalError("evaluation index outside trace");
      return pred_robustness(phi, trace, t, bindings);
    case Formula::Kind::Not:
      return -robustness(phi.child(), trace, t, bindings);
    case Formula::Kind::And:
      return std::min(robustness(phi.left(), trace, t, bindings),
                      robustness(phi.right(), trace, t, bindings));
    case Formula::Kind::Or:
      return std::max(robustness(phi.left(), trace, t, bindings),
                      robustness(phi.right(), trace, t, bindings));
    case Formula::Kind::Implies:
      return std::max(-robustness(phi.left(), trace, t, bindings),
                      robustness(phi.right(), trace, t, bindings));
    case Formula::Kind::Always: {
      auto w = sample_window(trace, t, phi.lo(), phi.hi());
      Formula body = phi.child();
      double m = kInf;
      for (std::size_t j = w.first; j <= w.last; ++j) {
        m = std::min(m, robustness(body, trace, j, bindings));
      }
      return m;
    }
    case Formula::Kind::Eventually: {
      auto w = sample_window(trace, t, phi.lo(), phi.hi());
      Formula body = phi.child();
      double m = -kInf;
      for (std::size_t j = w.first; j <= w.last; ++j) {
        m = std::max(m, robustness(body, trace, j, bindings));
      }
      return m;
    }
    case Formula::Kind::Until: {
      // sup over t' in the window of min(rho(psi,t'), inf over t'' in [t,t'] rho(phi,t''))
      auto w = sample_window(trace, t, phi.lo(), phi.hi());
      Formula lhs = phi.left();
      Formula rhs = phi.right();
      double best = -kInf;
      double prefix = kInf;
      for (std::size_t j = t; j <= w.last; ++j) {
        prefix = std::min(prefix, robustness(lhs, trace, j, bindings));
        if (j >= w.first) {
          best = std::max(best, std::min(robustness(rhs, trace, j, bindings), prefix));
        }
      }
      return best;
    }
  }
  throw EvalError("corrupt formula node");
}

bool satisfies(const Formula& phi, const Trace& trace, std::size_t t, const Bindings& bindings) {
  switch (phi.kind()) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::Pred:
      if (t >= trace.size()) throw EvalError("evaluation index outside trace");
      return pred_satisfies(phi, trace, t, bindings);
    case Formula::Kind::Not:
      return !satisfies(phi.child(), trace, t, bindings);
    case Formula::Kind::And:
      return satisfies(phi.left(), trace, t, bindings) &&
             satisfies(phi.right(), trace, t, bindings);
    case Formula::Kind::Or:
      return satisfies(phi.left(), trace, t, bindings) ||
             satisfies(phi.right(), trace, t, bindings);
    case Formula::Kind::Implies:
      return !satisfies(phi.left(), trace, t, bindings) ||
             satisfies(phi.right(), trace, t, bindings);
    case Formula::Kind::Always: {
      auto w = sample_window(trace, t, phi.lo(), phi.hi());
      Formula body = phi.child();
      for (std::size_t j = w.first; j <= w.last; ++j) {
        if (!satisfies(body, trace, j, bindings)) return false;
      }
      return true;
    }
    case Formula::Kind::Eventually: {
      auto w = sample_window(trace, t, phi.lo(), phi.hi());
      Formula body = phi.child();
      for (std::size_t j = w.first; j <= w.last; ++j) {
        if (satisfies(body, trace, j, bindings)) return true;
      }
      return false;
    }
    case Formula::Kind::Until: {
      auto w = sample_window(trace, t, phi.lo(), phi.hi());
      Formula lhs = phi.left();
      Formula rhs = phi.right();
      bool lhs_holds = true;
      for (std::size_t j = t; j <= w.last; ++j) {
        lhs_holds = lhs_holds && satisfies(lhs, trace, j, bindings);
        if (j >= w.first && lhs_holds && satisfies(rhs, trace, j, bindings)) return true;
        if (!lhs_holds) return false;
      }
      return false;
    }
  }
  throw EvalError("corrupt formula node");
}

}  // namespace drivebound::stl

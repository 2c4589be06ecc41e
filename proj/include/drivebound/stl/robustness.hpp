#pragma once

#include <cstddef>

#include "drivebound/stl/formula.hpp"
#include "drivebound/stl/trace.hpp"

namespace drivebound::stl {

// Quantitative robustness at sample index t under discrete-time semantics:
// sup/inf over the sample indices whose timestamps fall in [t+lo, t+hi],
// clipped to the trace end. Discrete-label predicates yield +inf/-inf.
// Throws EvalError for unbound parameters or a window entirely past the end.
double robustness(const Formula& phi, const Trace& trace, std::size_t t,
                  const Bindings& bindings = {});

// Direct Boolean evaluation (independent of robustness sign).
bool satisfies(const Formula& phi, const Trace& trace, std::size_t t,
               const Bindings& bindings = {});

// Inclusive index window [first, last] for a temporal operator evaluated at t.
struct SampleWindow {
  std::size_t first;
  std::size_t last;
};
SampleWindow sample_window(const Trace& trace, std::size_t t, double lo, double hi);

}  // namespace drivebound::stl

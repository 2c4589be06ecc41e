#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace drivebound::opt {

using Objective = std::function<double(std::span<const double>)>;

// Per-dimension box constraints, enforced by projection.
struct Bounds {
  std::vector<double> lo;
  std::vector<double> hi;

  void validate(std::size_t dim) const;
  void project(std::vector<double>& x) const;
};

struct OptResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evals = 0;
};

// Downhill simplex with the standard coefficients (reflection 1, expansion 2,
// contraction 0.5, shrink 0.5). Deterministic. Throws ConfigError when the
// budget cannot cover the initial simplex (dim + 1 evaluations).
OptResult nelder_mead(const Objective& objective, std::span<const double> x_init,
                      const Bounds& bounds, std::size_t budget);

struct Evaluated {
  std::vector<double> x;
  double f = 0.0;
};

struct CmaResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evals = 0;
  std::vector<Evaluated> all;  // every evaluated candidate, in evaluation order
};

// (mu/mu_w, lambda)-CMA-ES with rank-one and rank-mu covariance updates under
// the canonical parameterization. lambda = 0 selects 4 + floor(3 ln dim).
// Throws ConfigError for lambda in [1,3] or a budget below one generation.
CmaResult cma_es(const Objective& objective, std::span<const double> x_init, double sigma0,
                 const Bounds& bounds, std::size_t lambda, std::size_t budget,
                 std::uint64_t seed);

std::size_t cma_default_lambda(std::size_t dim);

}  // namespace drivebound::opt

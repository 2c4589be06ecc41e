#include <algorithm>
#include <cmath>
#include <numeric>

#include "drivebound/common/error.hpp"
#include "drivebound/opt/optimizers.hpp"

namespace drivebound::opt {

void Bounds::validate(std::size_t dim) const {
  if (lo.size() != dim || hi.size() != dim) {
    throw ConfigError("bounds dimension mismatch");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw ConfigError("bounds must be finite with lo < hi");
    }
  }
}

void Bounds::project(std::vector<double>& x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

OptResult nelder_mead(const Objective& objective, std::span<const double> x_init,
                      const Bounds& bounds, std::size_t budget) {
  const std::size_t n = x_init.size();
  if (n == 0) throw ConfigError("nelder_mead: empty initial point");
  bounds.validate(n);
  if (budget < n + 1) {
    throw ConfigError("nelder_mead: budget " + std::to_string(budget) +
                      " cannot cover the initial simplex (" + std::to_string(n + 1) + ")");
  }

  constexpr double alpha = 1.0;  // reflection
  constexpr double gamma = 2.0;  // expansion
  constexpr double beta = 0.5;   // contraction
  constexpr double delta = 0.5;  // shrink

  std::size_t evals = 0;
  auto eval = [&](std::vector<double> x) {
    bounds.project(x);
    double f = objective(x);
    ++evals;
    return std::pair<std::vector<double>, double>(std::move(x), f);
  };

  // Initial simplex: x0 plus a 5%-of-range step along each axis (flipped when
  // the step would leave the box).
  std::vector<std::pair<std::vector<double>, double>> simplex;
  simplex.reserve(n + 1);
  {
    std::vector<double> x0(x_init.begin(), x_init.end());
    simplex.push_back(eval(std::move(x0)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> xi(x_init.begin(), x_init.end());
    double h = 0.05 * (bounds.hi[i] - bounds.lo[i]);
    xi[i] = xi[i] + h <= bounds.hi[i] ? xi[i] + h : xi[i] - h;
    simplex.push_back(eval(std::move(xi)));
  }

  auto order = [&]() {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
  };
  order();

  while (evals < budget) {
    // Collapse check: all vertices numerically identical in value and spread.
    double spread = simplex.back().second - simplex.front().second;
    double geom = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      geom = std::max(geom, std::fabs(simplex.back().first[i] - simplex.front().first[i]));
    }
    if (spread <= 1e-15 && geom <= 1e-15) break;

    // Centroid of all but the worst vertex.
    std::vector<double> c(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) c[i] += simplex[v].first[i];
    }
    for (double& ci : c) ci /= static_cast<double>(n);
    const auto& worst = simplex[n];

    auto blend = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = c[i] + coef * (c[i] - worst.first[i]);
      return x;
    };

    auto reflected = eval(blend(alpha));
    if (reflected.second < simplex[0].second) {
      if (evals < budget) {
        auto expanded = eval(blend(gamma));
        simplex[n] = expanded.second < reflected.second ? std::move(expanded)
                                                        : std::move(reflected);
      } else {
        simplex[n] = std::move(reflected);
      }
    } else if (reflected.second < simplex[n - 1].second) {
      simplex[n] = std::move(reflected);
    } else if (evals < budget) {
      bool outside = reflected.second < worst.second;
      auto contracted = eval(blend(outside ? beta : -beta));
      if (contracted.second < std::min(reflected.second, worst.second)) {
        simplex[n] = std::move(contracted);
      } else {
        // Shrink toward the best vertex.
        for (std::size_t v = 1; v <= n && evals < budget; ++v) {
          std::vector<double> x(n);
          for (std::size_t i = 0; i < n; ++i) {
            x[i] = simplex[0].first[i] + delta * (simplex[v].first[i] - simplex[0].first[i]);
          }
          simplex[v] = eval(std::move(x));
        }
      }
    }
    order();
  }

  OptResult result;
  result.x = simplex[0].first;
  result.f = simplex[0].second;
  result.evals = evals;
  return result;
}

}  // namespace drivebound::opt

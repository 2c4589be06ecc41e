#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "drivebound/common/error.hpp"
#include "drivebound/opt/optimizers.hpp"

namespace drivebound::opt {

std::size_t cma_default_lambda(std::size_t dim) {
  return 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(static_cast<double>(dim))));
}

CmaResult cma_es(const Objective& objective, std::span<const double> x_init, double sigma0,
                 const Bounds& bounds, std::size_t lambda, std::size_t budget,
                 std::uint64_t seed) {
  const std::size_t n = x_init.size();
  if (n == 0) throw ConfigError("cma_es: empty initial point");
  bounds.validate(n);
  if (!(sigma0 > 0.0)) throw ConfigError("cma_es: sigma0 must be positive");
  if (lambda == 0) lambda = cma_default_lambda(n);
  if (lambda < 4) throw ConfigError("cma_es: population size must be >= 4");
  if (budget < lambda) {
    throw ConfigError("cma_es: budget " + std::to_string(budget) +
                      " exhausted before one generation (lambda " + std::to_string(lambda) + ")");
  }

  const double nd = static_cast<double>(n);
  const std::size_t mu = lambda / 2;

  // Canonical log-rank weights and learning rates.
  Eigen::VectorXd weights(mu);
  for (std::size_t i = 0; i < mu; ++i) {
    weights(i) = std::log(static_cast<double>(lambda + 1) / 2.0) -
                 std::log(static_cast<double>(i + 1));
  }
  weights /= weights.sum();
  const double mu_eff = 1.0 / weights.squaredNorm();

  const double c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
  const double d_sigma =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0) + c_sigma;
  const double c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
  const double c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
  const double c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                              ((nd + 2.0) * (nd + 2.0) + mu_eff));
  const double chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

  Eigen::VectorXd mean = Eigen::Map<const Eigen::VectorXd>(x_init.data(), n);
  double sigma = sigma0;
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd p_sigma = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd p_c = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd D = Eigen::VectorXd::Ones(n);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  CmaResult result;
  result.all.reserve(budget);
  result.f = std::numeric_limits<double>::infinity();

  struct Sample {
    Eigen::VectorXd z;  // N(0, I) draw
    Eigen::VectorXd y;  // B D z
    double f = 0.0;
  };
  std::vector<Sample> pop(lambda);
  std::size_t evals = 0;
  std::size_t gen = 0;

  while (evals + lambda <= budget) {
    ++gen;
    // Refresh the eigendecomposition; n is small here, so every generation.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    B = eig.eigenvectors();
    D = eig.eigenvalues().cwiseMax(1e-20).cwiseSqrt();

    for (std::size_t k = 0; k < lambda; ++k) {
      Sample& s = pop[k];
      s.z.resize(n);
      for (std::size_t i = 0; i < n; ++i) s.z(i) = gauss(rng);
      s.y = B * (D.asDiagonal() * s.z);
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = mean(i) + sigma * s.y(i);
      bounds.project(x);
      // Adapt with the projected candidate so the mean stays inside the box.
      for (std::size_t i = 0; i < n; ++i) s.y(i) = (x[i] - mean(i)) / sigma;
      s.f = objective(x);
      ++evals;
      result.all.push_back(Evaluated{x, s.f});
      if (s.f < result.f) {
        result.f = s.f;
        result.x = std::move(x);
      }
    }

    std::vector<std::size_t> idx(lambda);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return pop[a].f < pop[b].f; });

    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < mu; ++i) y_w += weights(i) * pop[idx[i]].y;
    mean += sigma * y_w;

    // C^{-1/2} y_w = B D^{-1} B^T y_w
    Eigen::VectorXd c_inv_sqrt_yw = B * D.cwiseInverse().asDiagonal() * (B.transpose() * y_w);
    p_sigma = (1.0 - c_sigma) * p_sigma +
              std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * c_inv_sqrt_yw;

    const double gens_norm = p_sigma.norm() /
                             std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * gen));
    const bool h_sigma = gens_norm < (1.4 + 2.0 / (nd + 1.0)) * chi_n;

    p_c = (1.0 - c_c) * p_c;
    if (h_sigma) p_c += std::sqrt(c_c * (2.0 - c_c) * mu_eff) * y_w;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < mu; ++i) {
      rank_mu += weights(i) * pop[idx[i]].y * pop[idx[i]].y.transpose();
    }
    const double h_corr = h_sigma ? 0.0 : c_1 * c_c * (2.0 - c_c);
    C = (1.0 - c_1 - c_mu + h_corr) * C + c_1 * (p_c * p_c.transpose()) + c_mu * rank_mu;
    C = 0.5 * (C + C.transpose());  // keep symmetric under round-off

    sigma *= std::exp((c_sigma / d_sigma) * (p_sigma.norm() / chi_n - 1.0));
    if (!std::isfinite(sigma) || sigma <= 0.0) break;
  }

  result.evals = evals;
  return result;
}

}  // namespace drivebound::opt

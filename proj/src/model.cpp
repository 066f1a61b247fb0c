#include "qgarch/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qgarch {

VariancePath variance_recursion(const QgarchParams& params,
                                const SeriesData& y, double sigma2_init) {
  if (!(sigma2_init > 0.0))
    throw std::invalid_argument("variance_recursion: sigma2_init must be > 0");
  const auto& obs = y.y();
  VariancePath path;
  path.sigma2.resize(obs.size());
  path.sigma2[0] = sigma2_init;
  for (std::size_t t = 1; t < obs.size(); ++t) {
    const double prev = obs[t - 1];
    path.sigma2[t] = params.omega + params.gamma * prev +
                     params.alpha * prev * prev +
                     params.beta * path.sigma2[t - 1];
  }
  return path;
}

SeriesData simulate(const QgarchParams& params, std::size_t n,
                    std::uint64_t seed, std::size_t burn_in) {
  if (!params.admissible())
    throw std::invalid_argument("simulate: parameters outside admissible region");
  if (!params.stationary())
    throw std::invalid_argument(
        "simulate: alpha + beta must be < 1 for a stationary start");
  if (n == 0) throw std::invalid_argument("simulate: n must be >= 1");

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const std::size_t total = burn_in + n;
  std::vector<double> y(n);
  double sigma2 = params.omega / (1.0 - params.alpha - params.beta);
  for (std::size_t t = 0; t < total; ++t) {
    if (!(sigma2 > 0.0))
      throw std::runtime_error(
          "simulate: conditional variance became non-positive at step " +
          std::to_string(t));
    const double yt = std::sqrt(sigma2) * normal(rng);
    if (t >= burn_in) y[t - burn_in] = yt;
    sigma2 = params.omega + params.gamma * yt + params.alpha * yt * yt +
             params.beta * sigma2;
  }
  return SeriesData(std::move(y));
}

double evaluate_log_posterior(const QgarchParams& params, const SeriesData& y,
                              double sigma2_init) {
  constexpr double kInadmissible = -std::numeric_limits<double>::infinity();
  if (!params.admissible()) return kInadmissible;

  const auto& obs = y.y();
  // Inline recursion: left-to-right accumulation so that appending an
  // observation adds exactly one term to the previous total.
  double log_post = 0.0;
  double sigma2 = sigma2_init;
  constexpr double log_2pi = 1.8378770664093454836;  // log(2*pi)
  for (std::size_t t = 0; t < obs.size(); ++t) {
    if (t > 0) {
      const double prev = obs[t - 1];
      sigma2 = params.omega + params.gamma * prev + params.alpha * prev * prev +
               params.beta * sigma2;
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) return kInadmissible;
    log_post += -0.5 * (log_2pi + std::log(sigma2)) -
                obs[t] * obs[t] / (2.0 * sigma2);
  }
  return log_post;
}

}  // namespace qgarch

#ifndef QGARCH_MODEL_HPP
#define QGARCH_MODEL_HPP

#include <cstdint>

#include "qgarch/params.hpp"
#include "qgarch/rng.hpp"
#include "qgarch/series.hpp"

namespace qgarch {

inline constexpr std::size_t kDefaultSimBurnIn = 500;

// sigma2[0] = sigma2_init; for t >= 1,
//   sigma2[t] = omega + gamma*y[t-1] + alpha*y[t-1]^2 + beta*sigma2[t-1].
// Total function: the path is returned even if elements are <= 0.
VariancePath variance_recursion(const QgarchParams& params,
                                const SeriesData& y, double sigma2_init);

// y_t = sigma_t * eps_t with eps_t iid N(0,1), started at the stationary
// variance omega/(1-alpha-beta) and run burn_in extra steps that are
// discarded. Throws std::invalid_argument unless params are admissible with
// alpha+beta < 1, std::runtime_error if a non-positive variance is hit.
SeriesData simulate(const QgarchParams& params, std::size_t n,
                    std::uint64_t seed, std::size_t burn_in = kDefaultSimBurnIn);

// Flat-prior log-posterior = Gaussian log-likelihood
//   sum_t [ -1/2 log(2 pi sigma_t^2) - y_t^2 / (2 sigma_t^2) ],
// accumulated left to right over t. Returns -infinity for parameters
// outside the admissible region or paths with any sigma_t^2 <= 0; the MH
// kernels treat that sentinel as automatic rejection.
double evaluate_log_posterior(const QgarchParams& params, const SeriesData& y,
                              double sigma2_init);

}  // namespace qgarch

#endif

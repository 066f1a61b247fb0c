#ifndef QGARCH_PARAMS_HPP
#define QGARCH_PARAMS_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>

namespace qgarch {

inline constexpr int kNumParams = 4;

// Parameter vector ordering used everywhere vectors/matrices appear:
// theta = (alpha, beta, omega, gamma).
inline const std::array<std::string, kNumParams> kParamNames = {
    "alpha", "beta", "omega", "gamma"};

/// QGARCH(1,1) parameters of the conditional-variance recursion
///   sigma_t^2 = omega + gamma*y_{t-1} + alpha*y_{t-1}^2 + beta*sigma_{t-1}^2.
struct QgarchParams {
  double alpha = 0.0;  // coefficient of y_{t-1}^2
  double beta = 0.0;   // coefficient of sigma_{t-1}^2
  double omega = 0.0;  // intercept (variance units)
  double gamma = 0.0;  // asymmetry coefficient of y_{t-1}, unconstrained sign

  // Admissibility for the flat prior: alpha >= 0, beta >= 0, omega > 0,
  // gamma free, everything finite. Per-point positivity of sigma_t^2 is
  // checked separately against the data.
  [[nodiscard]] bool admissible() const {
    return std::isfinite(alpha) && std::isfinite(beta) &&
           std::isfinite(omega) && std::isfinite(gamma) && alpha >= 0.0 &&
           beta >= 0.0 && omega > 0.0;
  }

  // Covariance stationarity, required only when simulating.
  [[nodiscard]] bool stationary() const { return alpha + beta < 1.0; }

  [[nodiscard]] Eigen::Vector4d to_vector() const {
    return {alpha, beta, omega, gamma};
  }

  static QgarchParams from_vector(const Eigen::Vector4d& v) {
    return {v[0], v[1], v[2], v[3]};
  }

  bool operator==(const QgarchParams&) const = default;
};

}  // namespace qgarch

#endif

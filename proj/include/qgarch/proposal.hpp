#ifndef QGARCH_PROPOSAL_HPP
#define QGARCH_PROPOSAL_HPP

#include <Eigen/Dense>
#include <vector>

#include "qgarch/rng.hpp"

namespace qgarch {

/// Multivariate Student's t proposal: location M, scatter Sigma, shape nu.
/// The covariance of draws is nu*Sigma/(nu-2), so nu must exceed 2.
/// Construction symmetrizes Sigma and caches its Cholesky factor; it throws
/// std::invalid_argument if Sigma is not positive definite or nu <= 2.
class ProposalSpec {
 public:
  ProposalSpec(Eigen::VectorXd mean, Eigen::MatrixXd sigma, double nu);

  [[nodiscard]] const Eigen::VectorXd& mean() const { return mean_; }
  [[nodiscard]] const Eigen::MatrixXd& sigma() const { return sigma_; }
  [[nodiscard]] double nu() const { return nu_; }
  [[nodiscard]] int dim() const { return static_cast<int>(mean_.size()); }
  [[nodiscard]] const Eigen::MatrixXd& chol_lower() const { return chol_l_; }
  [[nodiscard]] double log_det_sigma() const { return log_det_sigma_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd sigma_;
  double nu_;
  Eigen::MatrixXd chol_l_;
  double log_det_sigma_;
};

/// Online mean and scatter of absorbed parameter vectors (Welford update).
/// covariance() normalizes by the count, matching an expectation estimator.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(int dim);

  void absorb(const Eigen::VectorXd& theta);

  [[nodiscard]] std::size_t count() const { return count_; }
  [[nodiscard]] const Eigen::VectorXd& mean() const { return mean_; }
  [[nodiscard]] Eigen::MatrixXd covariance() const;

 private:
  std::size_t count_ = 0;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd centered_outer_sum_;
};

// Moment-matched fit: M = sample mean, V = count-normalized sample
// covariance, Sigma = V*(nu-2)/nu. Sigma is symmetrized; if its Cholesky
// factorization fails it is regularized by eps*I with
// eps = 1e-8 * trace(V)/dim. Throws std::invalid_argument on fewer than
// dim+1 samples or a degenerate (zero) scatter.
ProposalSpec fit_proposal(const std::vector<Eigen::VectorXd>& samples,
                          double nu);
ProposalSpec fit_proposal(const MomentAccumulator& moments, double nu);

// Deterministic kernel: M + L*z*sqrt(nu/w). Tests use it directly with w
// pinned to its mean nu, which is the Gaussian limit of the proposal.
Eigen::VectorXd student_t_transform(const ProposalSpec& spec,
                                    const Eigen::VectorXd& z, double w);

// z ~ N(0,I), w ~ chi-square(nu), then student_t_transform.
Eigen::VectorXd sample_student_t(const ProposalSpec& spec, Rng& rng);

// Exact log of the multivariate Student's t density, normalization included.
double student_t_log_density(const Eigen::VectorXd& theta,
                             const ProposalSpec& spec);

}  // namespace qgarch

#endif

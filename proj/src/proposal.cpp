#include "qgarch/proposal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgarch {

namespace {

// Lower Cholesky factor, or empty on failure.
Eigen::MatrixXd try_cholesky(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return {};
  return llt.matrixL();
}

}  // namespace

ProposalSpec::ProposalSpec(Eigen::VectorXd mean, Eigen::MatrixXd sigma,
                           double nu)
    : mean_(std::move(mean)), sigma_(std::move(sigma)), nu_(nu) {
  if (!(nu_ > 2.0))
    throw std::invalid_argument("ProposalSpec: nu must exceed 2");
  if (sigma_.rows() != mean_.size() || sigma_.cols() != mean_.size())
    throw std::invalid_argument("ProposalSpec: Sigma shape mismatch");
  sigma_ = ((sigma_ + sigma_.transpose()) / 2.0).eval();
  chol_l_ = try_cholesky(sigma_);
  if (chol_l_.size() == 0)
    throw std::invalid_argument("ProposalSpec: Sigma not positive definite");
  log_det_sigma_ = 2.0 * chol_l_.diagonal().array().log().sum();
}

MomentAccumulator::MomentAccumulator(int dim)
    : mean_(Eigen::VectorXd::Zero(dim)),
      centered_outer_sum_(Eigen::MatrixXd::Zero(dim, dim)) {}

void MomentAccumulator::absorb(const Eigen::VectorXd& theta) {
  ++count_;
  const Eigen::VectorXd delta = theta - mean_;
  mean_ += delta / static_cast<double>(count_);
  // Rank-1 Welford update keeps scatter symmetric by construction.
  centered_outer_sum_ += delta * (theta - mean_).transpose();
}

Eigen::MatrixXd MomentAccumulator::covariance() const {
  if (count_ == 0)
    throw std::invalid_argument("MomentAccumulator: no samples absorbed");
  Eigen::MatrixXd v = centered_outer_sum_ / static_cast<double>(count_);
  return ((v + v.transpose()) / 2.0).eval();
}

namespace {

ProposalSpec fit_from_moments(const Eigen::VectorXd& mean,
                              const Eigen::MatrixXd& v, std::size_t count,
                              double nu) {
  const auto dim = static_cast<std::size_t>(mean.size());
  if (count < dim + 1)
    throw std::invalid_argument("fit_proposal: need at least dim+1 samples");
  if (v.isZero(0.0))
    throw std::invalid_argument("fit_proposal: degenerate scatter (chain stuck)");

  Eigen::MatrixXd sigma = v * ((nu - 2.0) / nu);
  sigma = ((sigma + sigma.transpose()) / 2.0).eval();
  if (try_cholesky(sigma).size() == 0) {
    const double eps = 1e-8 * v.trace() / static_cast<double>(dim);
    sigma += eps * Eigen::MatrixXd::Identity(v.rows(), v.cols());
  }
  return ProposalSpec(mean, sigma, nu);
}

}  // namespace

ProposalSpec fit_proposal(const std::vector<Eigen::VectorXd>& samples,
                          double nu) {
  if (samples.empty())
    throw std::invalid_argument("fit_proposal: no samples");
  MomentAccumulator acc(static_cast<int>(samples.front().size()));
  for (const auto& s : samples) acc.absorb(s);
  return fit_from_moments(acc.mean(), acc.covariance(), acc.count(), nu);
}

ProposalSpec fit_proposal(const MomentAccumulator& moments, double nu) {
  return fit_from_moments(moments.mean(), moments.covariance(),
                          moments.count(), nu);
}

Eigen::VectorXd student_t_transform(const ProposalSpec& spec,
                                    const Eigen::VectorXd& z, double w) {
  return spec.mean() + spec.chol_lower() * z * std::sqrt(spec.nu() / w);
}

Eigen::VectorXd sample_student_t(const ProposalSpec& spec, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(spec.dim());
  for (int i = 0; i < spec.dim(); ++i) z[i] = normal(rng);
  std::chi_squared_distribution<double> chi2(spec.nu());
  const double w = chi2(rng);
  return student_t_transform(spec, z, w);
}

double student_t_log_density(const Eigen::VectorXd& theta,
                             const ProposalSpec& spec) {
  const double nu = spec.nu();
  const double p = spec.dim();
  const Eigen::VectorXd centered = theta - spec.mean();
  // quadratic form via the cached factor: solve L u = centered, |u|^2
  const Eigen::VectorXd u =
      spec.chol_lower().triangularView<Eigen::Lower>().solve(centered);
  const double quad = u.squaredNorm();
  return std::lgamma((nu + p) / 2.0) - std::lgamma(nu / 2.0) -
         0.5 * spec.log_det_sigma() -
         (p / 2.0) * std::log(nu * std::numbers::pi) -
         ((nu + p) / 2.0) * std::log1p(quad / nu);
}

}  // namespace qgarch

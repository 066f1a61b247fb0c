#ifndef QGARCH_MH_HPP
#define QGARCH_MH_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "qgarch/proposal.hpp"
#include "qgarch/rng.hpp"

namespace qgarch {

// Unnormalized log target density; -infinity marks inadmissible points.
using LogDensity = std::function<double(const Eigen::VectorXd&)>;

/// Current chain position with its cached log-posterior and MH counters.
struct ChainState {
  Eigen::VectorXd theta;
  double log_post = 0.0;
  std::uint64_t step_index = 0;
  std::uint64_t accepts = 0;
  std::uint64_t rejects = 0;

  bool last_accepted = false;

  static ChainState init(const Eigen::VectorXd& theta,
                         const LogDensity& target) {
    ChainState s;
    s.theta = theta;
    s.log_post = target(theta);
    return s;
  }
};

// log of min[1, exp(log_ratio)]; -infinity proposals never accept.
inline double log_accept_prob(double log_ratio) {
  return log_ratio < 0.0 ? log_ratio : 0.0;
}

// Random-walk Metropolis: theta' = theta + u, u_i uniform on
// [-half_widths_i, half_widths_i]. The proposal is symmetric, so the
// acceptance ratio reduces to the posterior ratio.
ChainState metropolis_step(const ChainState& state,
                           const Eigen::VectorXd& half_widths,
                           const LogDensity& target, Rng& rng);

// Same proposal restricted to one coordinate; used by the one-at-a-time
// baseline mode.
ChainState metropolis_step_single(const ChainState& state, int coord,
                                  double half_width, const LogDensity& target,
                                  Rng& rng);

// Independence MH with an arbitrary proposal: draws theta' ~ g, accepts
// with probability min[1, exp(l(theta') - l(theta) + q(theta) - q(theta'))].
ChainState independence_mh_step(const ChainState& state,
                                const LogDensity& target,
                                const std::function<Eigen::VectorXd(Rng&)>& draw,
                                const LogDensity& proposal_log_density,
                                Rng& rng);

// Independence MH with the Student's t proposal.
ChainState adaptive_mh_step(const ChainState& state, const ProposalSpec& spec,
                            const LogDensity& target, Rng& rng);

}  // namespace qgarch

#endif

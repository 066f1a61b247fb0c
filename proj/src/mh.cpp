#include "qgarch/mh.hpp"

#include <cmath>
#include <limits>

namespace qgarch {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Shared accept/reject tail. The uniform is drawn for every admissible
// proposal (even when the ratio exceeds 1) so the stream position depends
// only on admissibility, which constant shifts of the target cannot change.
ChainState resolve(const ChainState& state, Eigen::VectorXd&& proposal,
                   double proposal_log_post, double log_ratio, Rng& rng) {
  ChainState next = state;
  ++next.step_index;
  bool accept = false;
  if (proposal_log_post != kNegInf) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    accept = std::log(unif(rng)) < log_accept_prob(log_ratio);
  }
  if (accept) {
    next.theta = std::move(proposal);
    next.log_post = proposal_log_post;
    ++next.accepts;
  } else {
    ++next.rejects;
  }
  next.last_accepted = accept;
  return next;
}

}  // namespace

ChainState metropolis_step(const ChainState& state,
                           const Eigen::VectorXd& half_widths,
                           const LogDensity& target, Rng& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd proposal = state.theta;
  for (Eigen::Index i = 0; i < proposal.size(); ++i)
    proposal[i] += half_widths[i] * unif(rng);
  const double lp = target(proposal);
  return resolve(state, std::move(proposal), lp, lp - state.log_post, rng);
}

ChainState metropolis_step_single(const ChainState& state, int coord,
                                  double half_width, const LogDensity& target,
                                  Rng& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd proposal = state.theta;
  proposal[coord] += half_width * unif(rng);
  const double lp = target(proposal);
  return resolve(state, std::move(proposal), lp, lp - state.log_post, rng);
}

ChainState independence_mh_step(const ChainState& state,
                                const LogDensity& target,
                                const std::function<Eigen::VectorXd(Rng&)>& draw,
                                const LogDensity& proposal_log_density,
                                Rng& rng) {
  Eigen::VectorXd proposal = draw(rng);
  const double lp = target(proposal);
  double log_ratio = kNegInf;
  if (lp != kNegInf) {
    log_ratio = lp - state.log_post + proposal_log_density(state.theta) -
                proposal_log_density(proposal);
  }
  return resolve(state, std::move(proposal), lp, log_ratio, rng);
}

ChainState adaptive_mh_step(const ChainState& state, const ProposalSpec& spec,
                            const LogDensity& target, Rng& rng) {
  return independence_mh_step(
      state, target, [&spec](Rng& r) { return sample_student_t(spec, r); },
      [&spec](const Eigen::VectorXd& x) {
        return student_t_log_density(x, spec);
      },
      rng);
}

}  // namespace qgarch

#ifndef QGARCH_CHAIN_RUNNER_HPP
#define QGARCH_CHAIN_RUNNER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "qgarch/model.hpp"
#include "qgarch/params.hpp"
#include "qgarch/proposal.hpp"
#include "qgarch/series.hpp"

namespace qgarch {

/// Protocol knobs for the adaptive run. Defaults: 3000-step Metropolis
/// warm-up (discarded), 1000 pilot samples for the first proposal fit,
/// re-fit every 1000 updates from all post-warm-up samples, 100000
/// analysis samples, nu = 10.
struct AdaptationSchedule {
  std::size_t burn_in = 3000;
  std::size_t pilot = 1000;
  std::size_t refresh = 1000;
  std::size_t analysis_samples = 100000;
  double nu = 10.0;
  // Warm-up/pilot Metropolis half-widths, (alpha, beta, omega, gamma).
  // Precision is not needed here, only rough moment estimates.
  Eigen::Vector4d warmup_step_sizes{0.01, 0.02, 0.01, 0.01};
  // Optional: stop re-fitting once this many analysis steps are done.
  std::optional<std::size_t> freeze_after;

  void validate() const;  // throws std::invalid_argument
};

/// Random-walk baseline configuration. Half-widths are per parameter in
/// the (alpha, beta, omega, gamma) ordering.
struct MetropolisConfig {
  Eigen::Vector4d step_sizes{0.01, 0.02, 0.01, 0.01};
  std::size_t burn_in = 3000;
  std::size_t samples = 100000;
  bool one_at_a_time = false;

  void validate() const;
};

/// One proposal re-fit event: the analysis-phase step at which it happened,
/// the fitted moments, and the acceptance fraction of the window that
/// preceded it. Entry at step 0 is the pilot fit (its window acceptance is
/// the pilot Metropolis acceptance).
struct ProposalHistoryEntry {
  std::size_t step = 0;
  Eigen::Vector4d mean;
  Eigen::Matrix4d sigma;
  Eigen::Matrix4d scatter;  // V = count-normalized sample covariance
  double acceptance_window = 0.0;
};

/// Completed chain: analysis samples in step order plus per-step
/// bookkeeping and, for adaptive runs, the proposal re-fit history.
struct ChainResult {
  std::vector<QgarchParams> samples;
  std::vector<double> log_posts;
  std::vector<std::uint8_t> accepted;
  double acceptance_rate = 0.0;
  std::vector<ProposalHistoryEntry> proposal_history;

  [[nodiscard]] std::vector<double> parameter_series(int index) const;
};

// Data-scaled warm-up start: alpha=0.05, beta=0.5, gamma=0,
// omega = 0.5*Var(y)*(1-alpha-beta).
QgarchParams warmup_initial_point(const SeriesData& y);

// Full adaptive protocol: Metropolis warm-up (discarded), pilot retained
// for the first fit, then Student's t independence MH with periodic
// re-fits from the expanding post-warm-up pool. Throws std::runtime_error
// if the warm-up never reaches the admissible region or a fit degenerates.
ChainResult run_adaptive_chain(const SeriesData& y,
                               const AdaptationSchedule& schedule,
                               std::uint64_t seed);

// Plain Metropolis baseline on the same posterior.
ChainResult run_metropolis_chain(const SeriesData& y,
                                 const MetropolisConfig& config,
                                 std::uint64_t seed);

// CSV with header `step,alpha,beta,omega,gamma,log_post,accepted`.
void save_chain_csv(const ChainResult& chain,
                    const std::filesystem::path& file);
ChainResult load_chain_csv(const std::filesystem::path& file);

// JSON lines, one object per re-fit:
// {"step":..., "M":[4], "Sigma":[[4x4]], "V":[[4x4]], "acceptance_window":...}
void save_proposal_history(const std::vector<ProposalHistoryEntry>& history,
                           const std::filesystem::path& file);

}  // namespace qgarch

#endif

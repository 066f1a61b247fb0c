#ifndef QGARCH_EXPERIMENT_HPP
#define QGARCH_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qgarch/chain_runner.hpp"
#include "qgarch/diagnostics.hpp"
#include "qgarch/params.hpp"

namespace qgarch {

/// Declarative description of one end-to-end reproduction run. Defaults
/// regenerate the reference setup: true theta = (0.07, 0.8, 0.1, -0.05),
/// 2000 observations, nu = 10, 100000 analysis samples for both samplers.
struct ExperimentConfig {
  QgarchParams true_params{0.07, 0.8, 0.1, -0.05};
  std::size_t n_obs = 2000;
  std::size_t sim_burn_in = kDefaultSimBurnIn;
  std::uint64_t data_seed = 42;
  std::uint64_t chain_seed = 7;
  AdaptationSchedule schedule;
  MetropolisConfig metropolis;
  std::size_t histogram_bins = 50;
  std::filesystem::path output_dir = "qgarch_run";

  void validate() const;  // throws std::invalid_argument

  // Flat `key = value` text form; parse rejects unknown keys.
  [[nodiscard]] std::string to_key_value() const;
  static ExperimentConfig from_key_value(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

  // FNV-1a over the canonical key-value rendering.
  [[nodiscard]] std::uint64_t hash() const;
};

/// File set produced by run_experiment, all under config.output_dir.
struct RunArtifacts {
  std::filesystem::path data_csv;
  std::filesystem::path data_json;
  std::filesystem::path chain_adaptive_csv;
  std::filesystem::path chain_metropolis_csv;
  std::filesystem::path proposal_history_jsonl;
  std::filesystem::path report_adaptive_json;
  std::filesystem::path report_metropolis_json;
  std::filesystem::path table1_csv;
  std::filesystem::path manifest_json;

  DiagnosticsReport report_adaptive;
  DiagnosticsReport report_metropolis;
  ChainResult chain_adaptive;
  ChainResult chain_metropolis;
  std::uint64_t data_hash = 0;
};

/// Ratio two_tau_b / two_tau_a per parameter, errors combined in
/// quadrature of the relative errors. `available` is false when either
/// side's ACT failed to converge.
struct EfficiencyRatio {
  std::string name;
  double ratio = 0.0;
  double ratio_err = 0.0;
  bool available = false;
};

// Generates data, runs both samplers on the same series, writes every
// artifact (flushing partial results as phases complete), and returns the
// in-memory reports. Phase failures are rethrown with a phase label.
RunArtifacts run_experiment(const ExperimentConfig& config);

// Requires both reports to cover the same parameter set; throws
// std::invalid_argument otherwise.
std::vector<EfficiencyRatio> compare_efficiency(const DiagnosticsReport& a,
                                                const DiagnosticsReport& b);

// Table-1-layout comparison: rows true / adaptive mean,SD,SE,2tau(+err) /
// metropolis mean,SD,SE,2tau(+err); columns alpha,beta,omega,gamma.
void save_table1_csv(const QgarchParams& true_params,
                     const DiagnosticsReport& adaptive,
                     const DiagnosticsReport& metropolis,
                     const std::filesystem::path& file);

}  // namespace qgarch

#endif

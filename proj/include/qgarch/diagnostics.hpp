#ifndef QGARCH_DIAGNOSTICS_HPP
#define QGARCH_DIAGNOSTICS_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qgarch/params.hpp"

namespace qgarch {

/// Normalized autocorrelation ACF(0..t_max) of a scalar chain, computed
/// with the full-series mean and the count-normalized variance so that
/// ACF(0) == 1 exactly. n_source is the length of the series it came from.
struct AcfSeries {
  std::vector<double> values;  // index = lag
  std::size_t n_source = 0;

  [[nodiscard]] std::size_t t_max() const { return values.size() - 1; }
};

// OpenMP kernel, parallel over lags. Each lag's sum runs in a fixed order,
// so the result is identical to acf_serial bit for bit.
AcfSeries acf(std::span<const double> series, std::size_t t_max);

// Straight reference implementation kept for testing the kernel.
AcfSeries acf_serial(std::span<const double> series, std::size_t t_max);

/// Windowed integrated autocorrelation time
///   tau(W) = 1/2 + sum_{i=1..W} ACF(i)
/// with W the smallest lag satisfying W >= 6*tau(W), and
/// err(tau) = tau * sqrt(2*(2W+1)/N).
struct ActEstimate {
  double tau = 0.0;
  double tau_error = 0.0;
  std::size_t window = 0;
  bool converged = false;       // self-consistent window found below t_max
  bool negative_sum = false;    // windowed sum went negative (flagged, not clamped)
};

ActEstimate integrated_act(const AcfSeries& acf);

/// Per-parameter posterior summary. se = sd * sqrt(2*tau/k).
struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  double two_tau = 0.0;
  double two_tau_err = 0.0;
  std::size_t act_window = 0;
  bool act_converged = false;
};

struct HistogramData {
  std::vector<double> edges;        // bins+1 edges over [min, max]
  std::vector<std::uint64_t> counts;
};

struct DiagnosticsReport {
  std::vector<ParameterSummary> parameters;
  std::size_t chain_length = 0;
  std::vector<HistogramData> histograms;       // one per parameter
  std::vector<double> acceptance_trace;        // per-window fractions, if any

  [[nodiscard]] const ParameterSummary& parameter(const std::string& name) const;
};

// Scalar-series summary used per parameter; throws std::invalid_argument
// on chains shorter than 100 or with zero variance. ACT non-convergence is
// reported in the flags, not thrown. The ACF window grows geometrically
// until the self-consistent ACT window fits inside it.
ParameterSummary summarize_series(std::span<const double> series,
                                  const std::string& name);

// Four-parameter QGARCH chain summary over the (alpha, beta, omega, gamma)
// series. Histograms use `bins` equal-width bins.
DiagnosticsReport summarize(std::span<const QgarchParams> chain,
                            std::size_t bins = 50);

// Equal-width histogram over [min, max]; the max value lands in the last
// bin, and counts always sum to the series length.
HistogramData histogram(std::span<const double> series, std::size_t bins);

// report JSON: per-parameter {"mean","sd","se","two_tau","two_tau_err"}.
std::string report_to_json(const DiagnosticsReport& report,
                           std::uint64_t config_hash, std::uint64_t data_hash);
void save_report_json(const DiagnosticsReport& report, std::uint64_t config_hash,
                      std::uint64_t data_hash,
                      const std::filesystem::path& file);

// CSV emitters for figure data: `lag,acf` and `bin_left,bin_right,count`.
void save_acf_csv(const AcfSeries& acf, const std::filesystem::path& file);
void save_histogram_csv(const HistogramData& hist,
                        const std::filesystem::path& file);

}  // namespace qgarch

#endif

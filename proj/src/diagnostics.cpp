#include "qgarch/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "qgarch/io_util.hpp"

namespace qgarch {

namespace {

struct CenteredSeries {
  std::vector<double> centered;
  double c0;  // lag-0 autocovariance, count-normalized
};

CenteredSeries center(std::span<const double> series) {
  const std::size_t n = series.size();
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  CenteredSeries out;
  out.centered.resize(n);
  double ss = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out.centered[j] = series[j] - mean;
    ss += out.centered[j] * out.centered[j];
  }
  out.c0 = ss / static_cast<double>(n);
  return out;
}

void check_acf_preconditions(std::span<const double> series,
                             std::size_t t_max, double c0) {
  if (t_max < 1 || series.size() <= t_max)
    throw std::invalid_argument("acf: need series length > t_max >= 1");
  if (!(c0 > 0.0)) throw std::invalid_argument("acf: zero-variance series");
}

// Lag-t autocovariance over the truncated overlap j = 0..n-1-t, divided by
// n as in the estimator's definition (biased but stable).
double lag_cov(const std::vector<double>& x, std::size_t t) {
  double sum = 0.0;
  const std::size_t n = x.size();
  for (std::size_t j = 0; j + t < n; ++j) sum += x[j] * x[j + t];
  return sum / static_cast<double>(n);
}

}  // namespace

AcfSeries acf(std::span<const double> series, std::size_t t_max) {
  const CenteredSeries cs = center(series);
  check_acf_preconditions(series, t_max, cs.c0);

  AcfSeries out;
  out.n_source = series.size();
  out.values.assign(t_max + 1, 0.0);
  out.values[0] = 1.0;

  const auto lags = static_cast<std::int64_t>(t_max);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t t = 1; t <= lags; ++t)
    out.values[static_cast<std::size_t>(t)] =
        lag_cov(cs.centered, static_cast<std::size_t>(t)) / cs.c0;
  return out;
}

AcfSeries acf_serial(std::span<const double> series, std::size_t t_max) {
  const CenteredSeries cs = center(series);
  check_acf_preconditions(series, t_max, cs.c0);

  AcfSeries out;
  out.n_source = series.size();
  out.values.assign(t_max + 1, 0.0);
  out.values[0] = 1.0;
  for (std::size_t t = 1; t <= t_max; ++t)
    out.values[t] = lag_cov(cs.centered, t) / cs.c0;
  return out;
}

ActEstimate integrated_act(const AcfSeries& acf) {
  constexpr double kWindowFactor = 6.0;
  ActEstimate est;
  double tau = 0.5;
  for (std::size_t t = 1; t <= acf.t_max(); ++t) {
    tau += acf.values[t];
    if (static_cast<double>(t) >= kWindowFactor * tau) {
      est.tau = tau;
      est.window = t;
      est.converged = true;
      est.negative_sum = tau < 0.5;
      est.tau_error =
          tau * std::sqrt(2.0 * (2.0 * static_cast<double>(t) + 1.0) /
                          static_cast<double>(acf.n_source));
      return est;
    }
  }
  // No self-consistent window below t_max; report the full-window value.
  est.tau = tau;
  est.window = acf.t_max();
  est.converged = false;
  est.negative_sum = tau < 0.5;
  est.tau_error =
      tau * std::sqrt(2.0 * (2.0 * static_cast<double>(est.window) + 1.0) /
                      static_cast<double>(acf.n_source));
  return est;
}

ParameterSummary summarize_series(std::span<const double> series,
                                  const std::string& name) {
  const std::size_t k = series.size();
  if (k < 100)
    throw std::invalid_argument("summarize: chain shorter than 100 samples");

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(k);
  double ss = 0.0;
  for (double v : series) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(k - 1));
  if (!(sd > 0.0))
    throw std::invalid_argument("summarize: zero-variance chain for " + name);

  // Grow the ACF window geometrically until the ACT window self-consists.
  const std::size_t t_cap = std::min<std::size_t>(k - 1, 25600);
  std::size_t t_max = std::min<std::size_t>(t_cap, 100);
  ActEstimate act;
  for (;;) {
    act = integrated_act(acf(series, t_max));
    if (act.converged || t_max == t_cap) break;
    t_max = std::min(t_cap, t_max * 4);
  }

  ParameterSummary s;
  s.name = name;
  s.mean = mean;
  s.sd = sd;
  s.two_tau = 2.0 * act.tau;
  s.two_tau_err = 2.0 * act.tau_error;
  s.act_window = act.window;
  s.act_converged = act.converged;
  s.se = sd * std::sqrt(2.0 * act.tau / static_cast<double>(k));
  return s;
}

DiagnosticsReport summarize(std::span<const QgarchParams> chain,
                            std::size_t bins) {
  DiagnosticsReport report;
  report.chain_length = chain.size();
  std::vector<double> series(chain.size());
  for (int p = 0; p < kNumParams; ++p) {
    for (std::size_t i = 0; i < chain.size(); ++i)
      series[i] = chain[i].to_vector()[p];
    report.parameters.push_back(summarize_series(series, kParamNames[p]));
    report.histograms.push_back(histogram(series, bins));
  }
  return report;
}

HistogramData histogram(std::span<const double> series, std::size_t bins) {
  if (bins < 2) throw std::invalid_argument("histogram: bins must be >= 2");
  if (series.empty()) throw std::invalid_argument("histogram: empty series");

  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = hi > lo ? hi - lo : 1.0;

  HistogramData out;
  out.counts.assign(bins, 0);
  out.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b)
    out.edges[b] = lo + width * static_cast<double>(b) /
                            static_cast<double>(bins);

  const auto last = static_cast<double>(bins);
  for (double v : series) {
    auto idx = static_cast<std::size_t>(
        std::min(last - 1.0, std::floor((v - lo) / width * last)));
    ++out.counts[idx];
  }
  return out;
}

const ParameterSummary& DiagnosticsReport::parameter(
    const std::string& name) const {
  for (const auto& p : parameters)
    if (p.name == name) return p;
  throw std::invalid_argument("report has no parameter named " + name);
}

std::string report_to_json(const DiagnosticsReport& report,
                           std::uint64_t config_hash,
                           std::uint64_t data_hash) {
  nlohmann::json j;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& p : report.parameters) {
    params[p.name] = {{"mean", p.mean},
                      {"sd", p.sd},
                      {"se", p.se},
                      {"two_tau", p.two_tau},
                      {"two_tau_err", p.two_tau_err},
                      {"act_window", p.act_window},
                      {"act_converged", p.act_converged}};
  }
  j["parameters"] = params;
  j["chain_length"] = report.chain_length;
  if (!report.acceptance_trace.empty())
    j["acceptance_trace"] = report.acceptance_trace;
  j["config_hash"] = hex64(config_hash);
  j["data_hash"] = hex64(data_hash);
  return j.dump(2);
}

void save_report_json(const DiagnosticsReport& report,
                      std::uint64_t config_hash, std::uint64_t data_hash,
                      const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << report_to_json(report, config_hash, data_hash) << '\n';
}

void save_acf_csv(const AcfSeries& acf, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "lag,acf\n";
  for (std::size_t t = 0; t < acf.values.size(); ++t)
    out << t << ',' << format_double(acf.values[t]) << '\n';
}

void save_histogram_csv(const HistogramData& hist,
                        const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < hist.counts.size(); ++b)
    out << format_double(hist.edges[b]) << ',' << format_double(hist.edges[b + 1])
        << ',' << hist.counts[b] << '\n';
}

}  // namespace qgarch

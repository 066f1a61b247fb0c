#include "qgarch/chain_runner.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qgarch/io_util.hpp"
#include "qgarch/mh.hpp"

namespace qgarch {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

LogDensity make_target(const SeriesData& y, double sigma2_init) {
  return [&y, sigma2_init](const Eigen::VectorXd& v) {
    return evaluate_log_posterior(QgarchParams::from_vector(v), y, sigma2_init);
  };
}

void record(ChainResult& out, const ChainState& state) {
  out.samples.push_back(QgarchParams::from_vector(state.theta));
  out.log_posts.push_back(state.log_post);
  out.accepted.push_back(state.last_accepted ? 1 : 0);
}

nlohmann::json matrix_to_json(const Eigen::Matrix4d& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

void AdaptationSchedule::validate() const {
  if (burn_in == 0 || pilot == 0 || refresh == 0 || analysis_samples == 0)
    throw std::invalid_argument(
        "AdaptationSchedule: all counts must be positive");
  if (!(nu > 2.0))
    throw std::invalid_argument("AdaptationSchedule: nu must exceed 2");
  if (pilot < kNumParams + 1)
    throw std::invalid_argument(
        "AdaptationSchedule: pilot must cover at least dim+1 samples");
  for (int i = 0; i < kNumParams; ++i)
    if (!(warmup_step_sizes[i] > 0.0))
      throw std::invalid_argument(
          "AdaptationSchedule: warm-up step sizes must be positive");
}

void MetropolisConfig::validate() const {
  if (samples == 0)
    throw std::invalid_argument("MetropolisConfig: samples must be positive");
  for (int i = 0; i < kNumParams; ++i)
    if (!(step_sizes[i] > 0.0))
      throw std::invalid_argument(
          "MetropolisConfig: step sizes must be positive");
}

std::vector<double> ChainResult::parameter_series(int index) const {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = samples[i].to_vector()[index];
  return out;
}

QgarchParams warmup_initial_point(const SeriesData& y) {
  QgarchParams p;
  p.alpha = 0.05;
  p.beta = 0.5;
  p.gamma = 0.0;
  p.omega = 0.5 * y.sample_variance() * (1.0 - p.alpha - p.beta);
  return p;
}

ChainResult run_adaptive_chain(const SeriesData& y,
                               const AdaptationSchedule& schedule,
                               std::uint64_t seed) {
  schedule.validate();
  const double sigma2_init = y.sample_variance();
  const LogDensity target = make_target(y, sigma2_init);
  Rng rng(seed);

  ChainState state =
      ChainState::init(warmup_initial_point(y).to_vector(), target);

  // Warm-up by Metropolis, discarded.
  const Eigen::Vector4d& warmup_steps = schedule.warmup_step_sizes;
  for (std::size_t i = 0; i < schedule.burn_in; ++i)
    state = metropolis_step(state, warmup_steps, target, rng);
  if (state.log_post == kNegInf)
    throw std::runtime_error(
        "run_adaptive_chain: warm-up never left the inadmissible region");

  // Pilot samples feed the first proposal fit.
  MomentAccumulator pool(kNumParams);
  std::uint64_t pilot_accepts = 0;
  for (std::size_t i = 0; i < schedule.pilot; ++i) {
    state = metropolis_step(state, warmup_steps, target, rng);
    pool.absorb(state.theta);
    if (state.last_accepted) ++pilot_accepts;
  }

  ProposalSpec spec = fit_proposal(pool, schedule.nu);
  ChainResult out;
  out.proposal_history.push_back(
      {0, spec.mean(), spec.sigma(), pool.covariance(),
       static_cast<double>(pilot_accepts) / static_cast<double>(schedule.pilot)});

  out.samples.reserve(schedule.analysis_samples);
  out.log_posts.reserve(schedule.analysis_samples);
  out.accepted.reserve(schedule.analysis_samples);

  // Analysis phase: independence MH, re-fit every `refresh` steps from the
  // expanding post-warm-up pool until the freeze point (if any).
  const std::uint64_t accepts_before = state.accepts;
  std::uint64_t window_accepts = 0;
  for (std::size_t k = 1; k <= schedule.analysis_samples; ++k) {
    state = adaptive_mh_step(state, spec, target, rng);
    record(out, state);
    pool.absorb(state.theta);
    if (state.last_accepted) ++window_accepts;

    if (k % schedule.refresh == 0) {
      const double window_rate = static_cast<double>(window_accepts) /
                                 static_cast<double>(schedule.refresh);
      window_accepts = 0;
      const bool frozen =
          schedule.freeze_after.has_value() && k >= *schedule.freeze_after;
      if (!frozen) spec = fit_proposal(pool, schedule.nu);
      out.proposal_history.push_back(
          {k, spec.mean(), spec.sigma(), pool.covariance(), window_rate});
    }
  }

  out.acceptance_rate =
      static_cast<double>(state.accepts - accepts_before) /
      static_cast<double>(schedule.analysis_samples);
  return out;
}

ChainResult run_metropolis_chain(const SeriesData& y,
                                 const MetropolisConfig& config,
                                 std::uint64_t seed) {
  config.validate();
  const double sigma2_init = y.sample_variance();
  const LogDensity target = make_target(y, sigma2_init);
  Rng rng(seed);

  ChainState state =
      ChainState::init(warmup_initial_point(y).to_vector(), target);

  auto advance = [&](ChainState s) {
    if (config.one_at_a_time) {
      bool any = false;
      for (int c = 0; c < kNumParams; ++c) {
        s = metropolis_step_single(s, c, config.step_sizes[c], target, rng);
        any = any || s.last_accepted;
      }
      s.last_accepted = any;  // whether the sweep moved the chain
      return s;
    }
    return metropolis_step(s, config.step_sizes, target, rng);
  };

  for (std::size_t i = 0; i < config.burn_in; ++i) state = advance(state);
  if (state.log_post == kNegInf)
    throw std::runtime_error(
        "run_metropolis_chain: burn-in never left the inadmissible region");

  ChainResult out;
  out.samples.reserve(config.samples);
  const std::uint64_t accepts_before = state.accepts;
  const std::uint64_t decisions_before = state.accepts + state.rejects;
  for (std::size_t i = 0; i < config.samples; ++i) {
    state = advance(state);
    record(out, state);
  }
  out.acceptance_rate =
      static_cast<double>(state.accepts - accepts_before) /
      static_cast<double>(state.accepts + state.rejects - decisions_before);
  return out;
}

void save_chain_csv(const ChainResult& chain,
                    const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "step,alpha,beta,omega,gamma,log_post,accepted\n";
  std::string line;
  for (std::size_t i = 0; i < chain.samples.size(); ++i) {
    const auto& p = chain.samples[i];
    line.clear();
    line += std::to_string(i);
    line += ',';
    line += format_double(p.alpha);
    line += ',';
    line += format_double(p.beta);
    line += ',';
    line += format_double(p.omega);
    line += ',';
    line += format_double(p.gamma);
    line += ',';
    line += format_double(chain.log_posts[i]);
    line += ',';
    line += chain.accepted[i] ? '1' : '0';
    line += '\n';
    out << line;
  }
}

ChainResult load_chain_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open chain file: " + file.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "step,alpha,beta,omega,gamma,log_post,accepted")
    throw std::runtime_error("bad chain CSV header in " + file.string());

  ChainResult out;
  std::uint64_t accepts = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::array<std::string, 7> fields;
    std::size_t idx = 0;
    while (std::getline(ss, field, ',') && idx < fields.size())
      fields[idx++] = field;
    if (idx != fields.size())
      throw std::runtime_error("bad chain CSV row in " + file.string());
    QgarchParams p{std::stod(fields[1]), std::stod(fields[2]),
                   std::stod(fields[3]), std::stod(fields[4])};
    out.samples.push_back(p);
    out.log_posts.push_back(std::stod(fields[5]));
    const bool acc = fields[6] == "1";
    out.accepted.push_back(acc ? 1 : 0);
    if (acc) ++accepts;
  }
  if (!out.samples.empty())
    out.acceptance_rate =
        static_cast<double>(accepts) / static_cast<double>(out.samples.size());
  return out;
}

void save_proposal_history(const std::vector<ProposalHistoryEntry>& history,
                           const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (const auto& entry : history) {
    nlohmann::json j;
    j["step"] = entry.step;
    j["M"] = {entry.mean[0], entry.mean[1], entry.mean[2], entry.mean[3]};
    j["Sigma"] = matrix_to_json(entry.sigma);
    j["V"] = matrix_to_json(entry.scatter);
    j["acceptance_window"] = entry.acceptance_window;
    out << j.dump() << '\n';
  }
}

}  // namespace qgarch

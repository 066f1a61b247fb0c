#include "qgarch/experiment.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qgarch/io_util.hpp"
#include "qgarch/model.hpp"
#include "qgarch/rng.hpp"

namespace qgarch {

namespace {

[[noreturn]] void rethrow_with_phase(const std::string& phase) {
  try {
    throw;
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("[" + phase + "] " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error("[" + phase + "] " + e.what());
  }
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

void ExperimentConfig::validate() const {
  if (!true_params.admissible() || !true_params.stationary())
    throw std::invalid_argument(
        "config: true parameters must be admissible with alpha+beta < 1");
  if (n_obs < 2)
    throw std::invalid_argument("config: n_obs must be at least 2");
  if (histogram_bins < 2)
    throw std::invalid_argument("config: histogram_bins must be >= 2");
  if (metropolis.burn_in == 0)
    throw std::invalid_argument("config: metropolis burn-in must be positive");
  schedule.validate();
  metropolis.validate();
}

std::string ExperimentConfig::to_key_value() const {
  std::ostringstream out;
  out << "true_alpha = " << format_double(true_params.alpha) << '\n'
      << "true_beta = " << format_double(true_params.beta) << '\n'
      << "true_omega = " << format_double(true_params.omega) << '\n'
      << "true_gamma = " << format_double(true_params.gamma) << '\n'
      << "n_obs = " << n_obs << '\n'
      << "sim_burn_in = " << sim_burn_in << '\n'
      << "data_seed = " << data_seed << '\n'
      << "chain_seed = " << chain_seed << '\n'
      << "burn_in = " << schedule.burn_in << '\n'
      << "pilot = " << schedule.pilot << '\n'
      << "refresh = " << schedule.refresh << '\n'
      << "analysis_samples = " << schedule.analysis_samples << '\n'
      << "nu = " << format_double(schedule.nu) << '\n'
      << "warmup_step_alpha = " << format_double(schedule.warmup_step_sizes[0])
      << '\n'
      << "warmup_step_beta = " << format_double(schedule.warmup_step_sizes[1])
      << '\n'
      << "warmup_step_omega = " << format_double(schedule.warmup_step_sizes[2])
      << '\n'
      << "warmup_step_gamma = " << format_double(schedule.warmup_step_sizes[3])
      << '\n'
      << "freeze_after = "
      << (schedule.freeze_after ? std::to_string(*schedule.freeze_after)
                                : std::string("none"))
      << '\n'
      << "metropolis_step_alpha = " << format_double(metropolis.step_sizes[0])
      << '\n'
      << "metropolis_step_beta = " << format_double(metropolis.step_sizes[1])
      << '\n'
      << "metropolis_step_omega = " << format_double(metropolis.step_sizes[2])
      << '\n'
      << "metropolis_step_gamma = " << format_double(metropolis.step_sizes[3])
      << '\n'
      << "metropolis_burn_in = " << metropolis.burn_in << '\n'
      << "metropolis_samples = " << metropolis.samples << '\n'
      << "metropolis_one_at_a_time = " << bool_str(metropolis.one_at_a_time)
      << '\n'
      << "histogram_bins = " << histogram_bins << '\n'
      << "output_dir = " << output_dir.string() << '\n';
  return out.str();
}

ExperimentConfig ExperimentConfig::from_key_value(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string{};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    auto as_double = [&] { return std::stod(value); };
    auto as_count = [&] { return static_cast<std::size_t>(std::stoull(value)); };
    auto as_seed = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
    auto as_bool = [&] {
      if (value == "true") return true;
      if (value == "false") return false;
      throw std::invalid_argument("config: boolean key " + key +
                                  " must be true or false");
    };

    if (key == "true_alpha") config.true_params.alpha = as_double();
    else if (key == "true_beta") config.true_params.beta = as_double();
    else if (key == "true_omega") config.true_params.omega = as_double();
    else if (key == "true_gamma") config.true_params.gamma = as_double();
    else if (key == "n_obs") config.n_obs = as_count();
    else if (key == "sim_burn_in") config.sim_burn_in = as_count();
    else if (key == "data_seed") config.data_seed = as_seed();
    else if (key == "chain_seed") config.chain_seed = as_seed();
    else if (key == "burn_in") config.schedule.burn_in = as_count();
    else if (key == "pilot") config.schedule.pilot = as_count();
    else if (key == "refresh") config.schedule.refresh = as_count();
    else if (key == "analysis_samples")
      config.schedule.analysis_samples = as_count();
    else if (key == "nu") config.schedule.nu = as_double();
    else if (key == "warmup_step_alpha")
      config.schedule.warmup_step_sizes[0] = as_double();
    else if (key == "warmup_step_beta")
      config.schedule.warmup_step_sizes[1] = as_double();
    else if (key == "warmup_step_omega")
      config.schedule.warmup_step_sizes[2] = as_double();
    else if (key == "warmup_step_gamma")
      config.schedule.warmup_step_sizes[3] = as_double();
    else if (key == "freeze_after")
      config.schedule.freeze_after =
          value == "none" ? std::nullopt : std::optional(as_count());
    else if (key == "metropolis_step_alpha")
      config.metropolis.step_sizes[0] = as_double();
    else if (key == "metropolis_step_beta")
      config.metropolis.step_sizes[1] = as_double();
    else if (key == "metropolis_step_omega")
      config.metropolis.step_sizes[2] = as_double();
    else if (key == "metropolis_step_gamma")
      config.metropolis.step_sizes[3] = as_double();
    else if (key == "metropolis_burn_in") config.metropolis.burn_in = as_count();
    else if (key == "metropolis_samples") config.metropolis.samples = as_count();
    else if (key == "metropolis_one_at_a_time")
      config.metropolis.one_at_a_time = as_bool();
    else if (key == "histogram_bins") config.histogram_bins = as_count();
    else if (key == "output_dir") config.output_dir = value;
    else
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
  return from_key_value(read_file(file));
}

void ExperimentConfig::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << to_key_value();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(to_key_value()); }

std::vector<EfficiencyRatio> compare_efficiency(const DiagnosticsReport& a,
                                                const DiagnosticsReport& b) {
  if (a.parameters.size() != b.parameters.size())
    throw std::invalid_argument(
        "compare_efficiency: reports cover different parameter sets");
  std::vector<EfficiencyRatio> out;
  for (const auto& pa : a.parameters) {
    const auto& pb = b.parameter(pa.name);  // throws if missing
    EfficiencyRatio r;
    r.name = pa.name;
    r.ratio = pb.two_tau / pa.two_tau;
    const double rel_a = pa.two_tau_err / pa.two_tau;
    const double rel_b = pb.two_tau_err / pb.two_tau;
    r.ratio_err = r.ratio * std::sqrt(rel_a * rel_a + rel_b * rel_b);
    r.available = pa.act_converged && pb.act_converged;
    out.push_back(r);
  }
  return out;
}

namespace {

void append_row(std::ostream& out, const std::string& label,
                const std::array<double, 4>& values) {
  out << label;
  for (double v : values) out << ',' << format_double(v);
  out << '\n';
}

std::array<double, 4> per_parameter(const DiagnosticsReport& report,
                                    double ParameterSummary::* field) {
  std::array<double, 4> row{};
  for (int i = 0; i < kNumParams; ++i)
    row[i] = report.parameter(kParamNames[i]).*field;
  return row;
}

}  // namespace

void save_table1_csv(const QgarchParams& true_params,
                     const DiagnosticsReport& adaptive,
                     const DiagnosticsReport& metropolis,
                     const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "quantity,alpha,beta,omega,gamma\n";
  append_row(out, "true",
             {true_params.alpha, true_params.beta, true_params.omega,
              true_params.gamma});
  append_row(out, "adaptive_mean", per_parameter(adaptive, &ParameterSummary::mean));
  append_row(out, "adaptive_sd", per_parameter(adaptive, &ParameterSummary::sd));
  append_row(out, "adaptive_se", per_parameter(adaptive, &ParameterSummary::se));
  append_row(out, "adaptive_2tau",
             per_parameter(adaptive, &ParameterSummary::two_tau));
  append_row(out, "adaptive_2tau_err",
             per_parameter(adaptive, &ParameterSummary::two_tau_err));
  append_row(out, "metropolis_mean",
             per_parameter(metropolis, &ParameterSummary::mean));
  append_row(out, "metropolis_sd",
             per_parameter(metropolis, &ParameterSummary::sd));
  append_row(out, "metropolis_se",
             per_parameter(metropolis, &ParameterSummary::se));
  append_row(out, "metropolis_2tau",
             per_parameter(metropolis, &ParameterSummary::two_tau));
  append_row(out, "metropolis_2tau_err",
             per_parameter(metropolis, &ParameterSummary::two_tau_err));
}

RunArtifacts run_experiment(const ExperimentConfig& config) {
  try {
    config.validate();
  } catch (...) {
    rethrow_with_phase("validate");
  }

  const std::uint64_t config_hash = config.hash();
  RunArtifacts artifacts;
  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);
  config.save(dir / "config.txt");

  // Phase: data generation.
  std::optional<SeriesData> series;
  try {
    series = simulate(config.true_params, config.n_obs, config.data_seed,
                      config.sim_burn_in);
    artifacts.data_csv = dir / "data.csv";
    artifacts.data_json = dir / "data.json";
    series->save_csv(artifacts.data_csv);
    save_series_json(*series,
                     {config.data_seed, config.true_params, config.sim_burn_in},
                     artifacts.data_json);
  } catch (...) {
    rethrow_with_phase("data");
  }
  artifacts.data_hash = series->hash();

  // Phase: both chains on the same data, independent RNG streams. Partial
  // results are flushed before any failure propagates.
  auto adaptive_task = std::async(std::launch::async, [&] {
    return run_adaptive_chain(*series, config.schedule, config.chain_seed);
  });
  auto metropolis_task = std::async(std::launch::async, [&] {
    return run_metropolis_chain(*series, config.metropolis,
                                derive_seed(config.chain_seed, 1));
  });

  std::optional<ChainResult> adaptive;
  std::optional<ChainResult> metropolis;
  std::exception_ptr chain_error;
  std::string failed_phase;
  try {
    adaptive = adaptive_task.get();
  } catch (...) {
    chain_error = std::current_exception();
    failed_phase = "adaptive-chain";
  }
  try {
    metropolis = metropolis_task.get();
  } catch (...) {
    if (!chain_error) {
      chain_error = std::current_exception();
      failed_phase = "metropolis-chain";
    }
  }

  if (adaptive) {
    artifacts.chain_adaptive_csv = dir / "chain_adaptive.csv";
    artifacts.proposal_history_jsonl = dir / "proposal_history.jsonl";
    save_chain_csv(*adaptive, artifacts.chain_adaptive_csv);
    save_proposal_history(adaptive->proposal_history,
                          artifacts.proposal_history_jsonl);
  }
  if (metropolis) {
    artifacts.chain_metropolis_csv = dir / "chain_metropolis.csv";
    save_chain_csv(*metropolis, artifacts.chain_metropolis_csv);
  }
  if (chain_error) {
    try {
      std::rethrow_exception(chain_error);
    } catch (...) {
      rethrow_with_phase(failed_phase);
    }
  }

  // Phase: diagnostics.
  try {
    artifacts.report_adaptive = summarize(adaptive->samples, config.histogram_bins);
    for (const auto& entry : adaptive->proposal_history)
      if (entry.step > 0)
        artifacts.report_adaptive.acceptance_trace.push_back(
            entry.acceptance_window);
    artifacts.report_metropolis =
        summarize(metropolis->samples, config.histogram_bins);

    artifacts.report_adaptive_json = dir / "report_adaptive.json";
    artifacts.report_metropolis_json = dir / "report_metropolis.json";
    save_report_json(artifacts.report_adaptive, config_hash, artifacts.data_hash,
                     artifacts.report_adaptive_json);
    save_report_json(artifacts.report_metropolis, config_hash,
                     artifacts.data_hash, artifacts.report_metropolis_json);
  } catch (...) {
    rethrow_with_phase("diagnostics");
  }

  // Phase: comparison table. Both chains must have consumed the identical
  // observation file; a hash discrepancy aborts the comparison.
  try {
    if (fnv1a64(read_file(artifacts.data_csv)) != artifacts.data_hash)
      throw std::runtime_error(
          "observation file hash changed between sampling and comparison");
    compare_efficiency(artifacts.report_adaptive, artifacts.report_metropolis);
    artifacts.table1_csv = dir / "table1.csv";
    save_table1_csv(config.true_params, artifacts.report_adaptive,
                    artifacts.report_metropolis, artifacts.table1_csv);
  } catch (...) {
    rethrow_with_phase("comparison");
  }

  artifacts.chain_adaptive = std::move(*adaptive);
  artifacts.chain_metropolis = std::move(*metropolis);

  // Manifest ties every artifact to the config that produced it.
  try {
    nlohmann::json manifest;
    manifest["config_hash"] = hex64(config_hash);
    manifest["data_hash"] = hex64(artifacts.data_hash);
    nlohmann::json files = nlohmann::json::object();
    for (const auto& p :
         {artifacts.data_csv, artifacts.data_json, artifacts.chain_adaptive_csv,
          artifacts.chain_metropolis_csv, artifacts.proposal_history_jsonl,
          artifacts.report_adaptive_json, artifacts.report_metropolis_json,
          artifacts.table1_csv})
      files[p.filename().string()] = hex64(fnv1a64(read_file(p)));
    manifest["files"] = files;
    artifacts.manifest_json = dir / "manifest.json";
    std::ofstream out(artifacts.manifest_json);
    out << manifest.dump(2) << '\n';
  } catch (...) {
    rethrow_with_phase("manifest");
  }

  return artifacts;
}

}  // namespace qgarch

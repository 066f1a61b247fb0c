// Command-line front end: simulate, fit, diagnose, reproduce-table1.
// Exit codes: 0 success, 1 runtime failure, 2 validation failure.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qgarch/chain_runner.hpp"
#include "qgarch/diagnostics.hpp"
#include "qgarch/experiment.hpp"
#include "qgarch/io_util.hpp"
#include "qgarch/model.hpp"
#include "qgarch/rng.hpp"

namespace fs = std::filesystem;
using namespace qgarch;

namespace {

fs::path default_output_dir() {
  if (const char* env = std::getenv("QGARCH_OUTPUT_DIR")) return env;
  return ".";
}

void print_summary_row(const ParameterSummary& p) {
  std::printf("%-8s %12.5g %10.2g %10.2g %9.2g +- %-8.2g%s\n", p.name.c_str(),
              p.mean, p.sd, p.se, p.two_tau, p.two_tau_err,
              p.act_converged ? "" : "  (ACT window not converged)");
}

void print_report(const DiagnosticsReport& report) {
  std::printf("%-8s %12s %10s %10s %12s\n", "param", "mean", "SD", "SE",
              "2tau");
  for (const auto& p : report.parameters) print_summary_row(p);
}

void write_trace_csv(const ChainResult& chain, int param_index,
                     const std::string& name, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "step," << name << '\n';
  const auto series = chain.parameter_series(param_index);
  for (std::size_t i = 0; i < series.size(); ++i)
    out << i << ',' << format_double(series[i]) << '\n';
}

void write_figure_data(const RunArtifacts& artifacts, std::size_t bins,
                       const fs::path& dir) {
  // Fig 2: alpha histograms from both samplers.
  const auto alpha_a = artifacts.chain_adaptive.parameter_series(0);
  const auto alpha_m = artifacts.chain_metropolis.parameter_series(0);
  save_histogram_csv(histogram(alpha_a, bins),
                     dir / "fig2_hist_alpha_adaptive.csv");
  save_histogram_csv(histogram(alpha_m, bins),
                     dir / "fig2_hist_alpha_metropolis.csv");

  // Figs 3-4: Monte Carlo histories of alpha.
  write_trace_csv(artifacts.chain_adaptive, 0, "alpha",
                  dir / "fig3_trace_alpha_adaptive.csv");
  write_trace_csv(artifacts.chain_metropolis, 0, "alpha",
                  dir / "fig4_trace_alpha_metropolis.csv");

  // Figs 5-6: alpha autocorrelation, window sized to show the decay.
  auto fig_acf = [](const DiagnosticsReport& report,
                    const std::vector<double>& series) {
    const std::size_t window = report.parameter("alpha").act_window;
    const std::size_t t_max =
        std::min(series.size() - 1, std::max<std::size_t>(100, 3 * window));
    return acf(series, t_max);
  };
  save_acf_csv(fig_acf(artifacts.report_adaptive, alpha_a),
               dir / "fig5_acf_alpha_adaptive.csv");
  save_acf_csv(fig_acf(artifacts.report_metropolis, alpha_m),
               dir / "fig6_acf_alpha_metropolis.csv");

  // Figs 7-8: V elements vs analysis step, from the proposal history.
  {
    std::ofstream diag(dir / "fig7_v_diagonal.csv");
    std::ofstream offd(dir / "fig8_v_offdiagonal.csv");
    diag << "step,v_alpha_alpha,v_beta_beta,v_omega_omega,v_gamma_gamma\n";
    offd << "step,v_alpha_beta,v_alpha_omega,v_alpha_gamma,v_beta_omega,"
            "v_beta_gamma,v_omega_gamma\n";
    for (const auto& e : artifacts.chain_adaptive.proposal_history) {
      diag << e.step;
      for (int i = 0; i < 4; ++i) diag << ',' << format_double(e.scatter(i, i));
      diag << '\n';
      offd << e.step;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          offd << ',' << format_double(e.scatter(i, j));
      offd << '\n';
    }
  }

  // Fig 9: per-window acceptance of the adaptive MH phase.
  {
    std::ofstream out(dir / "fig9_acceptance.csv");
    out << "step,acceptance\n";
    for (const auto& e : artifacts.chain_adaptive.proposal_history)
      if (e.step > 0)
        out << e.step << ',' << format_double(e.acceptance_window) << '\n';
  }
}

struct FitOptions {
  std::string sampler;
  fs::path data_file;
  fs::path out_dir;
  std::uint64_t chain_seed = 2;
  AdaptationSchedule schedule;
  MetropolisConfig metropolis;
  std::size_t bins = 50;
};

// Canonical rendering of a fit invocation; hashed into the report for
// provenance.
std::string fit_settings_text(const FitOptions& opt, std::uint64_t data_hash) {
  std::ostringstream out;
  out << "sampler = " << opt.sampler << '\n'
      << "data_hash = " << hex64(data_hash) << '\n'
      << "chain_seed = " << opt.chain_seed << '\n';
  if (opt.sampler == "adaptive") {
    out << "burn_in = " << opt.schedule.burn_in << '\n'
        << "pilot = " << opt.schedule.pilot << '\n'
        << "refresh = " << opt.schedule.refresh << '\n'
        << "analysis_samples = " << opt.schedule.analysis_samples << '\n'
        << "nu = " << format_double(opt.schedule.nu) << '\n'
        << "freeze_after = "
        << (opt.schedule.freeze_after
                ? std::to_string(*opt.schedule.freeze_after)
                : std::string("none"))
        << '\n';
  } else {
    out << "burn_in = " << opt.metropolis.burn_in << '\n'
        << "samples = " << opt.metropolis.samples << '\n'
        << "one_at_a_time = "
        << (opt.metropolis.one_at_a_time ? "true" : "false") << '\n';
    for (int i = 0; i < kNumParams; ++i)
      out << "step_" << kParamNames[i] << " = "
          << format_double(opt.metropolis.step_sizes[i]) << '\n';
  }
  return out.str();
}

int run_fit(const FitOptions& opt) {
  const SeriesData data = SeriesData::load_csv(opt.data_file);
  fs::create_directories(opt.out_dir);
  const std::uint64_t data_hash = data.hash();
  const std::uint64_t settings_hash =
      fnv1a64(fit_settings_text(opt, data_hash));

  ChainResult chain;
  if (opt.sampler == "adaptive") {
    chain = run_adaptive_chain(data, opt.schedule, opt.chain_seed);
    save_proposal_history(chain.proposal_history,
                          opt.out_dir / "proposal_history.jsonl");
  } else {
    chain = run_metropolis_chain(data, opt.metropolis, opt.chain_seed);
  }
  save_chain_csv(chain, opt.out_dir / ("chain_" + opt.sampler + ".csv"));

  DiagnosticsReport report = summarize(chain.samples, opt.bins);
  for (const auto& e : chain.proposal_history)
    if (e.step > 0) report.acceptance_trace.push_back(e.acceptance_window);
  save_report_json(report, settings_hash, data_hash,
                   opt.out_dir / ("report_" + opt.sampler + ".json"));

  std::printf("sampler: %s   samples: %zu   acceptance: %.3f\n",
              opt.sampler.c_str(), chain.samples.size(),
              chain.acceptance_rate);
  print_report(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian QGARCH(1,1) inference via an adaptively fitted "
               "Student's t independence sampler, with a Metropolis baseline"};
  app.require_subcommand(1);

  // --- simulate ---------------------------------------------------------
  auto* sim = app.add_subcommand(
      "simulate", "Generate an artificial QGARCH series to CSV");
  QgarchParams sim_params{0.07, 0.8, 0.1, -0.05};
  std::size_t sim_n = 2000;
  std::uint64_t sim_seed = 42;
  std::size_t sim_burn = kDefaultSimBurnIn;
  fs::path sim_out;
  sim->add_option("--alpha", sim_params.alpha, "y_{t-1}^2 coefficient (>= 0)")
      ->capture_default_str();
  sim->add_option("--beta", sim_params.beta, "sigma_{t-1}^2 coefficient (>= 0)")
      ->capture_default_str();
  sim->add_option("--omega", sim_params.omega, "variance intercept (> 0)")
      ->capture_default_str();
  sim->add_option("--gamma", sim_params.gamma, "asymmetry coefficient")
      ->capture_default_str();
  sim->add_option("--n", sim_n, "number of observations")
      ->capture_default_str();
  sim->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  sim->add_option("--burn-in", sim_burn, "discarded leading steps")
      ->capture_default_str();
  sim->add_option("--out", sim_out, "output CSV path (default data.csv)");

  // --- fit --------------------------------------------------------------
  auto* fit = app.add_subcommand(
      "fit", "Run one sampler on a data file and report posterior summaries");
  FitOptions fit_opt;
  fit->add_option("--sampler", fit_opt.sampler, "which sampler to run")
      ->required()
      ->check(CLI::IsMember({"adaptive", "metropolis"}));
  fit->add_option("--data", fit_opt.data_file, "observation CSV")
      ->required()
      ->check(CLI::ExistingFile);
  fit->add_option("--chain-seed", fit_opt.chain_seed, "sampler RNG seed")
      ->capture_default_str();
  fit->add_option("--burn-in", fit_opt.schedule.burn_in,
                  "warm-up steps (also metropolis burn-in)")
      ->capture_default_str();
  fit->add_option("--pilot", fit_opt.schedule.pilot,
                  "samples for the first proposal fit")
      ->capture_default_str();
  fit->add_option("--refresh", fit_opt.schedule.refresh,
                  "steps between proposal re-fits")
      ->capture_default_str();
  fit->add_option("--analysis-samples", fit_opt.schedule.analysis_samples,
                  "retained adaptive samples")
      ->capture_default_str();
  fit->add_option("--nu", fit_opt.schedule.nu, "Student's t shape (> 2)")
      ->capture_default_str();
  std::int64_t fit_freeze = -1;
  fit->add_option("--freeze-after", fit_freeze,
                  "stop proposal re-fits after this analysis step")
      ->check(CLI::NonNegativeNumber);
  std::vector<double> fit_steps;
  fit->add_option("--step-sizes", fit_steps,
                  "metropolis half-widths: alpha beta omega gamma")
      ->expected(4);
  fit->add_option("--samples", fit_opt.metropolis.samples,
                  "metropolis retained samples")
      ->capture_default_str();
  fit->add_flag("--one-at-a-time", fit_opt.metropolis.one_at_a_time,
                "update one parameter per accept/reject decision");
  fit->add_option("--bins", fit_opt.bins, "histogram bins")
      ->capture_default_str();
  fit->add_option("--out-dir", fit_opt.out_dir, "output directory");

  // --- diagnose ---------------------------------------------------------
  auto* diag = app.add_subcommand(
      "diagnose", "Summarize an existing chain CSV (report, ACF, histograms)");
  fs::path diag_chain;
  fs::path diag_out;
  std::size_t diag_bins = 50;
  diag->add_option("--chain", diag_chain, "chain CSV produced by fit")
      ->required()
      ->check(CLI::ExistingFile);
  diag->add_option("--bins", diag_bins, "histogram bins")
      ->capture_default_str();
  diag->add_option("--out-dir", diag_out, "output directory");

  // --- reproduce-table1 -------------------------------------------------
  auto* repro = app.add_subcommand(
      "reproduce-table1",
      "Full comparison run with reference defaults: data, both samplers, "
      "table1.csv, and per-figure data CSVs");
  fs::path repro_config;
  ExperimentConfig config;
  std::int64_t repro_freeze = -1;
  fs::path repro_out;
  repro->add_option("--config", repro_config, "key = value config file")
      ->check(CLI::ExistingFile);
  auto* repro_data_seed =
      repro->add_option("--data-seed", config.data_seed, "data RNG seed");
  auto* repro_chain_seed =
      repro->add_option("--chain-seed", config.chain_seed, "chain RNG seed");
  auto* repro_n = repro->add_option("--n-obs", config.n_obs, "observations");
  auto* repro_samples = repro->add_option(
      "--analysis-samples", config.schedule.analysis_samples,
      "retained samples per sampler");
  auto* repro_freeze_opt =
      repro->add_option("--freeze-after", repro_freeze,
                        "stop proposal re-fits at this step")
          ->check(CLI::NonNegativeNumber);
  repro->add_option("--out-dir", repro_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (sim->parsed()) {
      fs::path out = sim_out;
      if (out.empty()) out = default_output_dir() / "data.csv";
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      const SeriesData data = simulate(sim_params, sim_n, sim_seed, sim_burn);
      data.save_csv(out);
      fs::path sidecar = out;
      sidecar.replace_extension(".json");
      save_series_json(data, {sim_seed, sim_params, sim_burn}, sidecar);
      std::printf("wrote %zu observations to %s (sidecar %s)\n", data.n(),
                  out.string().c_str(), sidecar.string().c_str());
      return 0;
    }

    if (fit->parsed()) {
      if (fit_freeze >= 0)
        fit_opt.schedule.freeze_after = static_cast<std::size_t>(fit_freeze);
      if (!fit_steps.empty())
        for (int i = 0; i < kNumParams; ++i)
          fit_opt.metropolis.step_sizes[i] = fit_steps[i];
      fit_opt.metropolis.burn_in = fit_opt.schedule.burn_in;
      if (fit_opt.out_dir.empty()) fit_opt.out_dir = default_output_dir();
      return run_fit(fit_opt);
    }

    if (diag->parsed()) {
      if (diag_out.empty()) diag_out = default_output_dir();
      fs::create_directories(diag_out);
      const ChainResult chain = load_chain_csv(diag_chain);
      if (chain.samples.empty())
        throw std::invalid_argument("chain file has no samples");
      DiagnosticsReport report = summarize(chain.samples, diag_bins);
      const std::uint64_t chain_hash = fnv1a64(
          [&] {
            std::ifstream in(diag_chain, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
          }());
      save_report_json(report, 0, chain_hash, diag_out / "report.json");
      for (int p = 0; p < kNumParams; ++p) {
        const auto series = chain.parameter_series(p);
        const auto& summary = report.parameter(kParamNames[p]);
        const std::size_t t_max =
            std::min(series.size() - 1,
                     std::max<std::size_t>(100, 3 * summary.act_window));
        save_acf_csv(acf(series, t_max),
                     diag_out / ("acf_" + kParamNames[p] + ".csv"));
        save_histogram_csv(report.histograms[p],
                           diag_out / ("hist_" + kParamNames[p] + ".csv"));
      }
      print_report(report);
      return 0;
    }

    if (repro->parsed()) {
      ExperimentConfig base;
      if (!repro_config.empty()) base = ExperimentConfig::load(repro_config);
      // flag overrides win over the file
      if (!repro_data_seed->empty()) base.data_seed = config.data_seed;
      if (!repro_chain_seed->empty()) base.chain_seed = config.chain_seed;
      if (!repro_n->empty()) base.n_obs = config.n_obs;
      if (!repro_samples->empty()) {
        base.schedule.analysis_samples = config.schedule.analysis_samples;
        base.metropolis.samples = config.schedule.analysis_samples;
      }
      if (!repro_freeze_opt->empty() && repro_freeze >= 0)
        base.schedule.freeze_after = static_cast<std::size_t>(repro_freeze);
      if (!repro_out.empty())
        base.output_dir = repro_out;
      else if (std::getenv("QGARCH_OUTPUT_DIR"))
        base.output_dir = default_output_dir();

      const RunArtifacts artifacts = run_experiment(base);
      write_figure_data(artifacts, base.histogram_bins, base.output_dir);

      std::printf("== adaptive (acceptance %.3f)\n",
                  artifacts.chain_adaptive.acceptance_rate);
      print_report(artifacts.report_adaptive);
      std::printf("== metropolis (acceptance %.3f)\n",
                  artifacts.chain_metropolis.acceptance_rate);
      print_report(artifacts.report_metropolis);
      const auto ratios = compare_efficiency(artifacts.report_adaptive,
                                             artifacts.report_metropolis);
      std::printf("== efficiency (metropolis 2tau / adaptive 2tau)\n");
      for (const auto& r : ratios) {
        if (r.available)
          std::printf("%-8s %8.3g +- %-8.2g\n", r.name.c_str(), r.ratio,
                      r.ratio_err);
        else
          std::printf("%-8s unavailable (ACT window not converged)\n",
                      r.name.c_str());
      }
      std::printf("artifacts in %s\n", base.output_dir.string().c_str());
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "qgarch/experiment.hpp"

using namespace qgarch;
namespace fs = std::filesystem;

namespace {

ExperimentConfig quick_config(const fs::path& out) {
  ExperimentConfig c;
  c.n_obs = 300;
  c.schedule.burn_in = 300;
  c.schedule.pilot = 200;
  c.schedule.refresh = 250;
  c.schedule.analysis_samples = 1500;
  c.metropolis.burn_in = 300;
  c.metropolis.samples = 1500;
  c.histogram_bins = 20;
  c.output_dir = out;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

DiagnosticsReport table1_like_report(double scale_two_tau_err) {
  // adaptive row of the reference results
  DiagnosticsReport r;
  const std::array<std::array<double, 2>, 4> two_tau = {
      {{4.1, 1.3}, {10.0, 5.0}, {11.0, 5.1}, {3.0, 0.4}}};
  const std::array<double, 4> means = {0.07143, 0.7905, 0.1054, -0.04643};
  for (int i = 0; i < 4; ++i) {
    ParameterSummary p;
    p.name = kParamNames[i];
    p.mean = means[i];
    p.two_tau = two_tau[i][0];
    p.two_tau_err = two_tau[i][1] * scale_two_tau_err;
    p.act_converged = true;
    r.parameters.push_back(p);
  }
  r.chain_length = 100000;
  return r;
}

}  // namespace

TEST_CASE("config survives the key-value round trip") {
  ExperimentConfig c;
  c.data_seed = 99;
  c.schedule.freeze_after = 42000;
  c.metropolis.one_at_a_time = true;
  c.metropolis.step_sizes[3] = 0.017;
  c.output_dir = "some/dir";

  const ExperimentConfig back = ExperimentConfig::from_key_value(c.to_key_value());
  CHECK(back.to_key_value() == c.to_key_value());
  CHECK(back.hash() == c.hash());
  CHECK(back.schedule.freeze_after == c.schedule.freeze_after);
  CHECK(back.metropolis.one_at_a_time);

  // hash is sensitive to any field
  ExperimentConfig d = c;
  d.chain_seed += 1;
  CHECK(d.hash() != c.hash());
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
  CHECK_THROWS_AS(ExperimentConfig::from_key_value("bogus_key = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_key_value("data_seed\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ExperimentConfig::from_key_value("metropolis_one_at_a_time = maybe\n"),
      std::invalid_argument);
  // comments and blank lines are fine
  const auto c = ExperimentConfig::from_key_value(
      "# a comment\n\nnu = 12.5\nfreeze_after = none\n");
  CHECK(c.schedule.nu == 12.5);
  CHECK_FALSE(c.schedule.freeze_after.has_value());
}

TEST_CASE("invalid configs fail in the validation phase, before sampling") {
  ExperimentConfig c = quick_config(temp_dir("qgarch_test_validate"));
  c.schedule.analysis_samples = 0;
  try {
    run_experiment(c);
    FAIL("expected validation error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("[validate]") == 0);
  }
  // nothing was generated
  CHECK_FALSE(fs::exists(c.output_dir / "data.csv"));
}

TEST_CASE("phase failures carry their phase label") {
  ExperimentConfig c = quick_config(temp_dir("qgarch_test_phase"));
  // admissible and stationary, but the simulated variance path collapses
  c.true_params = {0.05, 0.1, 0.001, -0.3};
  try {
    run_experiment(c);
    FAIL("expected data-phase failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("[data]") == 0);
  }
  // the config was still flushed for inspection
  CHECK(fs::exists(c.output_dir / "config.txt"));
  CHECK_FALSE(fs::exists(c.output_dir / "chain_adaptive.csv"));
}

TEST_CASE("experiment writes the full artifact set") {
  const fs::path dir = temp_dir("qgarch_test_artifacts");
  const RunArtifacts a = run_experiment(quick_config(dir));

  for (const auto& f :
       {"config.txt", "data.csv", "data.json", "chain_adaptive.csv",
        "chain_metropolis.csv", "proposal_history.jsonl",
        "report_adaptive.json", "report_metropolis.json", "table1.csv",
        "manifest.json"})
    CHECK(fs::exists(dir / f));

  CHECK(a.chain_adaptive.samples.size() == 1500);
  CHECK(a.chain_metropolis.samples.size() == 1500);
  CHECK(a.report_adaptive.parameters.size() == 4);
  CHECK(a.report_metropolis.parameters.size() == 4);
  CHECK_FALSE(a.report_adaptive.acceptance_trace.empty());

  // table1 layout: header + 11 labeled rows
  std::istringstream table(slurp(dir / "table1.csv"));
  std::string line;
  std::getline(table, line);
  CHECK(line == "quantity,alpha,beta,omega,gamma");
  std::vector<std::string> labels;
  while (std::getline(table, line))
    labels.push_back(line.substr(0, line.find(',')));
  const std::vector<std::string> want{
      "true", "adaptive_mean", "adaptive_sd", "adaptive_se", "adaptive_2tau",
      "adaptive_2tau_err", "metropolis_mean", "metropolis_sd", "metropolis_se",
      "metropolis_2tau", "metropolis_2tau_err"};
  CHECK(labels == want);
}

TEST_CASE("identical configs reproduce every artifact byte for byte") {
  const fs::path dir = temp_dir("qgarch_test_repro");
  const ExperimentConfig c = quick_config(dir);
  run_experiment(c);

  std::map<std::string, std::string> first;
  for (const auto& entry : fs::directory_iterator(dir))
    first[entry.path().filename().string()] = slurp(entry.path());

  run_experiment(c);
  for (const auto& entry : fs::directory_iterator(dir)) {
    INFO(entry.path().filename().string());
    CHECK(first.at(entry.path().filename().string()) == slurp(entry.path()));
  }
}

TEST_CASE("efficiency comparison reproduces the reference ratio") {
  const DiagnosticsReport adaptive = table1_like_report(1.0);
  DiagnosticsReport metropolis = table1_like_report(1.0);
  // metropolis row of the reference results
  const std::array<std::array<double, 2>, 4> two_tau = {
      {{340.0, 100.0}, {840.0, 280.0}, {820.0, 290.0}, {54.0, 7.0}}};
  for (int i = 0; i < 4; ++i) {
    metropolis.parameters[i].two_tau = two_tau[i][0];
    metropolis.parameters[i].two_tau_err = two_tau[i][1];
  }

  const auto ratios = compare_efficiency(adaptive, metropolis);
  REQUIRE(ratios.size() == 4);
  CHECK(ratios[0].ratio == doctest::Approx(340.0 / 4.1).epsilon(1e-12));
  CHECK(ratios[0].ratio > 80.0);  // the reference "factor of 90" scale
  const double want_err =
      340.0 / 4.1 *
      std::sqrt(std::pow(1.3 / 4.1, 2) + std::pow(100.0 / 340.0, 2));
  CHECK(ratios[0].ratio_err == doctest::Approx(want_err).epsilon(1e-12));
  CHECK(ratios[0].available);
}

TEST_CASE("efficiency comparison of identical reports is unity") {
  const DiagnosticsReport r = table1_like_report(1.0);
  for (const auto& ratio : compare_efficiency(r, r)) {
    CHECK(ratio.ratio == 1.0);
    CHECK(ratio.available);
  }
}

TEST_CASE("non-converged ACT marks the ratio unavailable but continues") {
  const DiagnosticsReport a = table1_like_report(1.0);
  DiagnosticsReport b = table1_like_report(1.0);
  b.parameters[2].act_converged = false;
  const auto ratios = compare_efficiency(a, b);
  CHECK(ratios[2].available == false);
  CHECK(ratios[0].available == true);
}

TEST_CASE("mismatched parameter sets are an error") {
  const DiagnosticsReport a = table1_like_report(1.0);
  DiagnosticsReport b = table1_like_report(1.0);
  b.parameters.pop_back();
  CHECK_THROWS_AS(compare_efficiency(a, b), std::invalid_argument);
  b = table1_like_report(1.0);
  b.parameters[1].name = "delta";
  CHECK_THROWS_AS(compare_efficiency(a, b), std::invalid_argument);
}

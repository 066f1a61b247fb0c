#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "qgarch/chain_runner.hpp"
#include "qgarch/model.hpp"

using namespace qgarch;

namespace {

SeriesData test_data() {
  static const SeriesData data = simulate({0.07, 0.8, 0.1, -0.05}, 400, 42);
  return data;
}

AdaptationSchedule quick_schedule() {
  AdaptationSchedule s;
  s.burn_in = 400;
  s.pilot = 200;
  s.refresh = 250;
  s.analysis_samples = 2000;
  return s;
}

}  // namespace

TEST_CASE("schedule and config validation") {
  AdaptationSchedule s;
  s.analysis_samples = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = AdaptationSchedule{};
  s.nu = 2.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  MetropolisConfig m;
  m.step_sizes[2] = 0.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("warm-up start point is admissible and data-scaled") {
  const auto data = test_data();
  const QgarchParams p = warmup_initial_point(data);
  CHECK(p.admissible());
  CHECK(p.stationary());
  CHECK(p.omega == doctest::Approx(0.5 * data.sample_variance() * 0.45));
}

TEST_CASE("adaptive chain produces the requested samples and stays "
          "admissible") {
  const auto data = test_data();
  const ChainResult chain = run_adaptive_chain(data, quick_schedule(), 1);
  REQUIRE(chain.samples.size() == 2000);
  REQUIRE(chain.log_posts.size() == 2000);
  REQUIRE(chain.accepted.size() == 2000);

  const double s2_init = data.sample_variance();
  for (const auto& p : chain.samples) {
    CHECK(p.admissible());
    CHECK(std::isfinite(evaluate_log_posterior(p, data, s2_init)));
  }
  // cache coherence: stored log_post matches a fresh evaluation
  for (std::size_t i = 0; i < chain.samples.size(); i += 500)
    CHECK(chain.log_posts[i] ==
          evaluate_log_posterior(chain.samples[i], data, s2_init));

  std::uint64_t accepted = 0;
  for (auto a : chain.accepted) accepted += a;
  CHECK(chain.acceptance_rate ==
        doctest::Approx(static_cast<double>(accepted) / 2000.0));
}

TEST_CASE("proposal history records the pilot fit plus one entry per window") {
  const auto data = test_data();
  const ChainResult chain = run_adaptive_chain(data, quick_schedule(), 1);
  REQUIRE(chain.proposal_history.size() == 1 + 2000 / 250);
  CHECK(chain.proposal_history.front().step == 0);
  for (std::size_t i = 1; i < chain.proposal_history.size(); ++i)
    CHECK(chain.proposal_history[i].step == i * 250);
}

TEST_CASE("refresh larger than the run degenerates to a single fit") {
  const auto data = test_data();
  AdaptationSchedule s = quick_schedule();
  s.refresh = 10000;  // > analysis_samples
  const ChainResult chain = run_adaptive_chain(data, s, 3);
  CHECK(chain.proposal_history.size() == 1);
  CHECK(chain.samples.size() == 2000);
}

TEST_CASE("freeze mode stops proposal updates but keeps measuring V") {
  const auto data = test_data();
  AdaptationSchedule s = quick_schedule();
  s.freeze_after = 1000;
  const ChainResult chain = run_adaptive_chain(data, s, 5);

  const auto& history = chain.proposal_history;
  REQUIRE(history.size() == 9);  // pilot + 8 windows
  // re-fits stop at the freeze step, so every entry from there on carries
  // the last fit made before it (window at step 750)
  const auto* frozen = &history[3];
  CHECK(frozen->step == 750);
  for (std::size_t i = 4; i < history.size(); ++i) {
    CHECK((history[i].mean - frozen->mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((history[i].sigma - frozen->sigma).cwiseAbs().maxCoeff() == 0.0);
    // the measured scatter keeps evolving with the pool
    CHECK((history[i].scatter - frozen->scatter).cwiseAbs().maxCoeff() > 0.0);
  }
  // before the freeze the fits were still moving
  CHECK((history[2].sigma - history[3].sigma).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("chains are bit-reproducible for a fixed seed") {
  const auto data = test_data();
  const ChainResult a = run_adaptive_chain(data, quick_schedule(), 17);
  const ChainResult b = run_adaptive_chain(data, quick_schedule(), 17);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK(a.samples[i] == b.samples[i]);

  MetropolisConfig mc;
  mc.burn_in = 200;
  mc.samples = 1000;
  const ChainResult c = run_metropolis_chain(data, mc, 17);
  const ChainResult d = run_metropolis_chain(data, mc, 17);
  for (std::size_t i = 0; i < c.samples.size(); ++i)
    CHECK(c.samples[i] == d.samples[i]);
}

TEST_CASE("metropolis baseline runs in both update modes") {
  const auto data = test_data();
  MetropolisConfig mc;
  mc.burn_in = 200;
  mc.samples = 1500;

  const ChainResult joint = run_metropolis_chain(data, mc, 23);
  CHECK(joint.samples.size() == 1500);
  CHECK(joint.acceptance_rate > 0.05);
  CHECK(joint.acceptance_rate < 0.95);
  CHECK(joint.proposal_history.empty());

  mc.one_at_a_time = true;
  const ChainResult single = run_metropolis_chain(data, mc, 23);
  CHECK(single.samples.size() == 1500);
  for (const auto& p : single.samples) CHECK(p.admissible());
}

TEST_CASE("chain CSV round trip is exact") {
  const auto data = test_data();
  AdaptationSchedule s = quick_schedule();
  s.analysis_samples = 500;
  const ChainResult chain = run_adaptive_chain(data, s, 29);

  const auto file = std::filesystem::temp_directory_path() /
                    "qgarch_test_chain_roundtrip.csv";
  save_chain_csv(chain, file);
  const ChainResult loaded = load_chain_csv(file);
  std::filesystem::remove(file);

  REQUIRE(loaded.samples.size() == chain.samples.size());
  for (std::size_t i = 0; i < chain.samples.size(); ++i) {
    CHECK(loaded.samples[i] == chain.samples[i]);
    CHECK(loaded.log_posts[i] == chain.log_posts[i]);
    CHECK(loaded.accepted[i] == chain.accepted[i]);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "qgarch/proposal.hpp"

using namespace qgarch;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd example_sigma() {
  MatrixXd s(4, 4);
  s << 1.0, 0.3, 0.1, -0.2,
       0.3, 2.0, 0.4, 0.1,
       0.1, 0.4, 1.5, 0.3,
      -0.2, 0.1, 0.3, 1.2;
  return s;
}

}  // namespace

TEST_CASE("proposal spec validates its inputs") {
  const VectorXd m = VectorXd::Zero(4);
  CHECK_THROWS_AS(ProposalSpec(m, example_sigma(), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ProposalSpec(m, -example_sigma(), 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ProposalSpec(m, MatrixXd::Identity(3, 3), 10.0),
                  std::invalid_argument);

  // slight asymmetry is symmetrized away on construction
  MatrixXd skew = example_sigma();
  skew(0, 1) += 1e-13;
  const ProposalSpec spec(m, skew, 10.0);
  CHECK((spec.sigma() - spec.sigma().transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("moment accumulator reproduces two-pass mean and covariance") {
  Rng rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<VectorXd> samples;
  MomentAccumulator acc(3);
  for (int i = 0; i < 500; ++i) {
    VectorXd v(3);
    for (int j = 0; j < 3; ++j) v[j] = 2.0 * normal(rng) + 0.5 * j;
    samples.push_back(v);
    acc.absorb(v);
  }

  VectorXd mean = VectorXd::Zero(3);
  for (const auto& v : samples) mean += v;
  mean /= 500.0;
  MatrixXd cov = MatrixXd::Zero(3, 3);
  for (const auto& v : samples) cov += (v - mean) * (v - mean).transpose();
  cov /= 500.0;

  CHECK((acc.mean() - mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((acc.covariance() - cov).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((acc.covariance() - acc.covariance().transpose())
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("proposal fit rejects degenerate inputs") {
  // fewer than dim+1 samples
  std::vector<VectorXd> two{VectorXd::Zero(4), VectorXd::Zero(4)};
  two[0] << 0.0, 0.0, 1.0, 0.0;
  two[1] << 0.2, 0.0, 1.0, 0.0;
  CHECK_THROWS_AS(fit_proposal(two, 10.0), std::invalid_argument);

  // chain stuck at one point: identically zero scatter
  std::vector<VectorXd> stuck(20, two[0]);
  CHECK_THROWS_AS(fit_proposal(stuck, 10.0), std::invalid_argument);
}

TEST_CASE("fitted scatter obeys the (nu-2)/nu moment relation") {
  // iid standard normals: V -> I, so Sigma -> (nu-2)/nu * I = 0.8 I
  Rng rng(321);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<VectorXd> samples;
  samples.reserve(1000000);
  for (int i = 0; i < 1000000; ++i) {
    VectorXd v(4);
    for (int j = 0; j < 4; ++j) v[j] = normal(rng);
    samples.push_back(v);
  }
  const ProposalSpec spec = fit_proposal(samples, 10.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double want = i == j ? 0.8 : 0.0;
      CHECK(std::abs(spec.sigma()(i, j) - want) < 0.008);
    }
  CHECK(spec.mean().cwiseAbs().maxCoeff() < 0.005);
}

TEST_CASE("near-singular fits are regularized instead of failing") {
  // points on a plane: rank-deficient scatter
  Rng rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<VectorXd> samples;
  for (int i = 0; i < 50; ++i) {
    VectorXd v(4);
    v << normal(rng), normal(rng), 0.0, 0.0;
    v[2] = v[0] + v[1];  // exact linear dependence
    v[3] = v[0] - v[1];
    samples.push_back(v);
  }
  const ProposalSpec spec = fit_proposal(samples, 10.0);  // must not throw
  Eigen::LLT<MatrixXd> llt(spec.sigma());
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("student t draws reproduce the proposal moments") {
  VectorXd m(4);
  m << 0.07, 0.8, 0.1, -0.05;
  const ProposalSpec spec(m, 0.01 * example_sigma(), 10.0);

  Rng rng(77);
  const int n = 200000;
  MomentAccumulator acc(4);
  for (int i = 0; i < n; ++i) acc.absorb(sample_student_t(spec, rng));

  // covariance of draws = nu Sigma/(nu-2)
  const MatrixXd want = spec.nu() / (spec.nu() - 2.0) * spec.sigma();
  const MatrixXd got = acc.covariance();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(got(i, j) == doctest::Approx(want(i, j)).epsilon(0.05).scale(
                             std::sqrt(want(i, i) * want(j, j))));

  // mean within 3 standard errors per component
  for (int i = 0; i < 4; ++i) {
    const double se = std::sqrt(got(i, i) / n);
    CHECK(std::abs(acc.mean()[i] - m[i]) < 3.0 * se);
  }
}

TEST_CASE("fit followed by fresh draws reproduces the measured moments") {
  // correlated input cloud -> fit -> draws must carry mean M and
  // covariance V = nu Sigma/(nu-2) back out
  Rng rng(55);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<VectorXd> cloud;
  for (int i = 0; i < 20000; ++i) {
    VectorXd v(4);
    const double shared = normal(rng);
    for (int j = 0; j < 4; ++j) v[j] = 0.5 * shared + normal(rng) * (1.0 + j);
    cloud.push_back(v);
  }
  MomentAccumulator in(4);
  for (const auto& v : cloud) in.absorb(v);
  const ProposalSpec spec = fit_proposal(cloud, 10.0);

  MomentAccumulator out(4);
  for (int i = 0; i < 400000; ++i) out.absorb(sample_student_t(spec, rng));
  const MatrixXd want = in.covariance();
  const MatrixXd got = out.covariance();
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(out.mean()[i] - in.mean()[i]) <
          4.0 * std::sqrt(got(i, i) / 400000.0));
    for (int j = 0; j < 4; ++j)
      CHECK(got(i, j) == doctest::Approx(want(i, j)).epsilon(0.05).scale(
                             std::sqrt(want(i, i) * want(j, j))));
  }
}

TEST_CASE("pinning the mixing weight at nu gives the Gaussian limit") {
  VectorXd m = VectorXd::Zero(4);
  const ProposalSpec spec(m, example_sigma(), 10.0);

  Rng rng(13);
  std::normal_distribution<double> normal(0.0, 1.0);
  MomentAccumulator acc(4);
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    VectorXd z(4);
    for (int j = 0; j < 4; ++j) z[j] = normal(rng);
    acc.absorb(student_t_transform(spec, z, spec.nu()));
  }
  // w == nu cancels the scale mixing; covariance is Sigma itself
  const MatrixXd got = acc.covariance();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(got(i, j) == doctest::Approx(example_sigma()(i, j))
                             .epsilon(0.03)
                             .scale(std::sqrt(example_sigma()(i, i) *
                                              example_sigma()(j, j))));
}

TEST_CASE("log density at the mode matches the normalization constant") {
  VectorXd m(4);
  m << 1.0, -2.0, 0.5, 0.0;
  const double nu = 10.0;
  const ProposalSpec spec(m, example_sigma(), nu);

  const double want = std::lgamma((nu + 4.0) / 2.0) - std::lgamma(nu / 2.0) -
                      0.5 * std::log(example_sigma().determinant()) -
                      2.0 * std::log(nu * M_PI);
  CHECK(student_t_log_density(m, spec) ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("log-density ratio one sigma out along a unit axis") {
  // Sigma = I, nu = 10, offset (1,0,0,0): kernel ratio (1 + 1/10)^{-7}
  VectorXd m = VectorXd::Zero(4);
  const ProposalSpec spec(m, MatrixXd::Identity(4, 4), 10.0);
  VectorXd x = m;
  x[0] = 1.0;
  const double log_ratio =
      student_t_log_density(x, spec) - student_t_log_density(m, spec);
  CHECK(log_ratio == doctest::Approx(-7.0 * std::log(1.1)).epsilon(1e-12));
  CHECK(std::exp(log_ratio) == doctest::Approx(0.5132).epsilon(1e-3));
}

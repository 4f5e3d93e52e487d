#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pdbayes/errors.hpp"
#include "pdbayes/gaussian.hpp"
#include "pdbayes/pointprocess.hpp"

using namespace pdbayes;

TEST_CASE("binomial pmf values") {
  const BinomialCardinality card(25, 24.0 / 25.0);
  CHECK(binomial_pmf(card, 24) == doctest::Approx(25.0 * std::pow(0.96, 24) * 0.04).epsilon(1e-12));
  CHECK(binomial_pmf(card, 24) == doctest::Approx(0.3754).epsilon(1e-4));
  CHECK(binomial_pmf(BinomialCardinality(15, 0.0), 0) == 1.0);
  CHECK(binomial_pmf(BinomialCardinality(15, 0.0), 1) == 0.0);
  CHECK(binomial_pmf(BinomialCardinality(15, 1.0), 15) == 1.0);
  CHECK(binomial_pmf(card, -1) == 0.0);
  CHECK(binomial_pmf(card, 26) == 0.0);
  CHECK(binomial_logpmf(card, 26) == -INFINITY);
  CHECK(binomial_logpmf(BinomialCardinality(4, 0.0), 2) == -INFINITY);
}

TEST_CASE("binomial pmf sums to one") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const BinomialCardinality card(static_cast<int>(rng() % 201), unit(rng));
    const Eigen::VectorXd pmf = binomial_pmf_vector(card);
    CHECK(pmf.size() == card.n_max + 1);
    CHECK(std::abs(pmf.sum() - 1.0) <= 1e-12);
    CHECK((pmf.array() >= 0.0).all());
  }
}

TEST_CASE("log binomial coefficient") {
  CHECK(std::exp(log_binomial_coefficient(10, 3)) == doctest::Approx(120.0).epsilon(1e-12));
  CHECK(log_binomial_coefficient(7, 0) == doctest::Approx(0.0));
}

TEST_CASE("mixture intensity evaluation") {
  const GaussianMixtureIntensity f({{2.0, Point2(0.2, 0.55), 0.0018}, {0.5, Point2(0.4, 0.1), 0.3}});
  const Point2 x(0.25, 0.5);
  const double expected = 2.0 * isotropic_normal_pdf(x, Point2(0.2, 0.55), 0.0018) +
                          0.5 * isotropic_normal_pdf(x, Point2(0.4, 0.1), 0.3);
  CHECK(f(x) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(eval_prior_intensity(f, x) == f(x));
  const IidClusterPrior prior{f, BinomialCardinality(15, 0.3)};
  CHECK(eval_prior_intensity(prior, x) == f(x));
  CHECK_THROWS_AS(eval_prior_intensity(f, Point2(-0.1, 0.2)), ValidationError);
}

TEST_CASE("mass on the wedge matches quadrature") {
  const GaussianMixtureIntensity f({{2.0, Point2(0.2, 0.15), 0.01}, {1.0, Point2(0.5, 0.5), 0.5}});
  const double quad = oracle::integrate_2d([&](double b, double p) { return f(Point2(b, p)); }, 0.0, 8.0, 0.0, 8.0, 80);
  CHECK(f.mass_on_wedge() == doctest::Approx(quad).epsilon(1e-9));
  CHECK(truncated_gaussian_mass(Point2(0.0, 0.0), 1.0) == doctest::Approx(0.25));

  const ObservationModel obs(0.9, 0.01);
  CHECK(vanished_mass(f, obs) == doctest::Approx(0.1 * quad).epsilon(1e-9));
  CHECK(vanished_mass(f, ObservationModel(1.0, 0.01)) == 0.0);
}

TEST_CASE("unexpected intensity integrates to one on the wedge") {
  const UnexpectedModel model(20.0, BinomialCardinality(15, 0.5));
  const double quad = oracle::integrate_2d(
      [&](double b, double p) { return unexpected_intensity(model, Point2(b, p)); }, 0.0, 3.0, 0.0, 3.0, 60);
  CHECK(quad == doctest::Approx(1.0).epsilon(1e-10));
  const Point2 y(0.1, 0.3);
  CHECK(unexpected_log_intensity(model, y) == doctest::Approx(std::log(unexpected_intensity(model, y))));
  CHECK(unexpected_intensity(model, Point2(0, 0)) == doctest::Approx(400.0).epsilon(1e-14));
}

TEST_CASE("model parameter validation") {
  CHECK_THROWS_AS(BinomialCardinality(-1, 0.5), ValidationError);
  CHECK_THROWS_AS(BinomialCardinality(5, 1.5), ValidationError);
  CHECK_THROWS_AS(ObservationModel(1.2, 0.1), ValidationError);
  CHECK_THROWS_AS(ObservationModel(0.9, 0.0), ValidationError);
  CHECK_THROWS_AS(UnexpectedModel(0.0, BinomialCardinality(5, 0.5)), ValidationError);
  CHECK_THROWS_AS(GaussianMixtureIntensity({{0.0, Point2(0, 0), 1.0}}), ValidationError);
  CHECK_THROWS_AS(GaussianMixtureIntensity({{1.0, Point2(0, 0), -1.0}}), ValidationError);
}

TEST_CASE("Gaussian product identity") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Point2 y(unit(rng), unit(rng)), mu(unit(rng), unit(rng)), x(unit(rng), unit(rng));
    const double so = 0.001 + unit(rng), s = 0.001 + unit(rng);
    const auto g = gaussian_product(y, so, mu, s);
    CHECK(g.variance == doctest::Approx(so * s / (so + s)));
    CHECK(g.mean.isApprox((s * y + so * mu) / (s + so)));
    const double lhs = isotropic_normal_pdf(y, x, so) * isotropic_normal_pdf(x, mu, s);
    CHECK(g.scale * isotropic_normal_pdf(x, g.mean, g.variance) == doctest::Approx(lhs).epsilon(1e-10));
  }
}

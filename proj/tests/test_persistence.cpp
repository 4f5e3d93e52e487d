#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pdbayes/errors.hpp"
#include "pdbayes/persistence.hpp"

using namespace pdbayes;

namespace {

PointCloud random_cloud(std::mt19937_64& rng, int n, int dim = 2) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointCloud cloud(n, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < dim; ++j) cloud(i, j) = unit(rng);
  return cloud;
}

std::vector<oracle::Pair> sorted_pairs(const BirthDeathDiagram& d) {
  std::vector<oracle::Pair> out;
  for (const auto& p : d.pairs) out.push_back({p.birth, p.death});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("pairwise distances form a metric") {
  std::mt19937_64 rng(1);
  const PointCloud cloud = random_cloud(rng, 12, 3);
  const Eigen::MatrixXd d = pairwise_distances(cloud);
  for (int i = 0; i < 12; ++i) {
    CHECK(d(i, i) == 0.0);
    for (int j = 0; j < 12; ++j) {
      CHECK(d(i, j) == d(j, i));
      CHECK(d(i, j) == doctest::Approx((cloud.row(i) - cloud.row(j)).norm()).epsilon(1e-14));
      for (int k = 0; k < 12; ++k) CHECK(d(i, k) <= d(i, j) + d(j, k) + 1e-12);
    }
  }
}

TEST_CASE("unit square has a single H1 point") {
  const auto diagrams = vr_persistence(fixtures::unit_square(), 1);
  REQUIRE(diagrams.size() == 2);
  const auto pd = tilt(diagrams[1]);
  REQUIRE(pd.size() == 1);
  CHECK(pd.points[0].x() == 1.0);
  CHECK(pd.points[0].y() == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));

  // Four vertices merge at distance 1; one component survives.
  CHECK(diagrams[0].pairs.size() == 3);
  CHECK(diagrams[0].essential.size() == 1);
}

TEST_CASE("figure-eight fixture has two loops") {
  const auto pd = tilt(vr_persistence(fixtures::figure_eight(), 1)[1]);
  CHECK(pd.size() == 2);
}

TEST_CASE("essential features die at the cutoff") {
  // Circle of 12 points: the loop is still open at a radius just above the step.
  PointCloud cloud(12, 2);
  for (int i = 0; i < 12; ++i) cloud.row(i) << std::cos(i * std::numbers::pi / 6), std::sin(i * std::numbers::pi / 6);
  const double step = 2.0 * std::sin(std::numbers::pi / 12);
  const auto diagrams = vr_persistence(cloud, 1, step * 1.01);
  REQUIRE(diagrams[1].essential.size() == 1);
  CHECK(diagrams[1].pairs.empty());
  const auto pd = tilt(diagrams[1]);
  REQUIRE(pd.size() == 1);
  CHECK(pd.points[0].y() == doctest::Approx(step * 1.01 - diagrams[1].essential[0]));
  CHECK(diagrams[0].max_radius == step * 1.01);
}

TEST_CASE("default cutoff is the diameter") {
  std::mt19937_64 rng(4);
  const PointCloud cloud = random_cloud(rng, 9);
  const auto diagrams = vr_persistence(cloud, 1);
  CHECK(diagrams[1].max_radius == pairwise_distances(cloud).maxCoeff());
  // At the diameter the complex is a full simplex, so nothing in H1 survives.
  CHECK(diagrams[1].essential.empty());
  CHECK(diagrams[0].essential.size() == 1);
}

TEST_CASE("matches the boundary-matrix oracle on random clouds") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> count(1, 9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = count(rng);
    PointCloud cloud = trial % 2 ? random_cloud(rng, n) : PointCloud(n, 2);
    if (trial % 2 == 0)
      for (int i = 0; i < n; ++i) cloud.row(i) << std::floor(3 * unit(rng)), std::floor(3 * unit(rng));
    const Eigen::MatrixXd dist = pairwise_distances(cloud);
    const double radius = dist.maxCoeff() > 0.0 ? (0.5 + 0.5 * unit(rng)) * dist.maxCoeff() : 1.0;
    const auto got = vr_persistence(cloud, 1, radius);
    const auto want = oracle::rips_reduction(dist, radius);
    for (int d = 0; d < 2; ++d) {
      CAPTURE(trial);
      CHECK(sorted_pairs(got[d]) == want.pairs[d]);
      auto ess = got[d].essential;
      std::sort(ess.begin(), ess.end());
      CHECK(ess == want.essential[d]);
    }
  }
}

TEST_CASE("duplicate points add no zero-persistence pairs") {
  PointCloud cloud(5, 2);
  cloud << 0, 0, 0, 0, 1, 0, 1, 1, 0, 1;
  const auto diagrams = vr_persistence(cloud, 1);
  for (const auto& p : diagrams[0].pairs) CHECK(p.death > p.birth);
  CHECK(diagrams[0].pairs.size() == 3);
  CHECK(tilt(diagrams[1]).size() == 1);
}

TEST_CASE("H0 only when max_dim is 0") {
  const auto diagrams = vr_persistence(fixtures::unit_square(), 0);
  CHECK(diagrams.size() == 1);
  CHECK(diagrams[0].dim == 0);
}

TEST_CASE("invalid persistence inputs are rejected") {
  CHECK_THROWS_AS(vr_persistence(fixtures::unit_square(), 2), ValidationError);
  CHECK_THROWS_AS(vr_persistence(fixtures::unit_square(), -1), ValidationError);
  CHECK_THROWS_AS(vr_persistence(fixtures::unit_square(), 1, 0.0), ValidationError);
  CHECK_THROWS_AS(vr_persistence(PointCloud(0, 2), 1), ValidationError);
  PointCloud bad = fixtures::unit_square();
  bad(2, 1) = std::nan("");
  CHECK_THROWS_AS(vr_persistence(bad, 1), ValidationError);
}

TEST_CASE("tilt maps death to persistence") {
  BirthDeathDiagram d{1, {{0.5, 1.25}, {0.1, 0.2}}, {0.3}, 2.0};
  const auto pd = tilt(d);
  REQUIRE(pd.size() == 3);
  CHECK(pd.points[0] == Point2(0.5, 0.75));
  CHECK(pd.points[1].x() == 0.1);
  CHECK(pd.points[1].y() == doctest::Approx(0.1));
  CHECK(pd.points[2] == Point2(0.3, 1.7));
  for (const auto& p : pd.points) CHECK(in_wedge(p));
}

TEST_CASE("top-persistence subsampling") {
  PersistenceDiagram pd;
  pd.points = {{0.3, 0.1}, {0.2, 0.5}, {0.1, 0.5}, {0.0, 0.9}, {0.4, 0.1}};
  const auto top = subsample_diagram(pd, 3);
  // Persistence 0.9 and both 0.5 points, kept in input order.
  REQUIRE(top.size() == 3);
  CHECK(top.points[0] == Point2(0.2, 0.5));
  CHECK(top.points[1] == Point2(0.1, 0.5));
  CHECK(top.points[2] == Point2(0.0, 0.9));

  // The tie at 0.5 is broken by the smaller birth.
  const auto two = subsample_diagram(pd, 2);
  CHECK(two.points[0] == Point2(0.1, 0.5));
  CHECK(two.points[1] == Point2(0.0, 0.9));

  CHECK(subsample_diagram(pd, 10).points == pd.points);
  CHECK_THROWS_AS(subsample_diagram(pd, 0), ValidationError);
}

TEST_CASE("uniform subsampling is seeded") {
  PersistenceDiagram pd;
  for (int i = 0; i < 30; ++i) pd.points.emplace_back(0.01 * i, 0.02 * i);
  const auto a = subsample_diagram(pd, 10, SubsampleStrategy::UniformRandom, 5);
  const auto b = subsample_diagram(pd, 10, SubsampleStrategy::UniformRandom, 5);
  const auto c = subsample_diagram(pd, 10, SubsampleStrategy::UniformRandom, 6);
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a.points[i - 1].x() < a.points[i].x());
}

TEST_CASE("wedge validation") {
  CHECK(in_wedge(Point2(0.0, 0.0)));
  CHECK_FALSE(in_wedge(Point2(-0.1, 0.2)));
  CHECK_FALSE(in_wedge(Point2(0.1, -1e-9)));
  CHECK_FALSE(in_wedge(Point2(INFINITY, 1.0)));
  PersistenceDiagram pd;
  pd.points = {{0.1, 0.2}, {0.3, -0.1}};
  CHECK_THROWS_AS(validate_diagram(pd), ValidationError);
}

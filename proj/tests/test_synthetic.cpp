#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "pdbayes/errors.hpp"
#include "pdbayes/persistence.hpp"
#include "pdbayes/synthetic.hpp"

using namespace pdbayes;

namespace {

std::vector<double> sorted_persistence(const PersistenceDiagram& pd) {
  std::vector<double> p;
  for (const auto& x : pd.points) p.push_back(x.y());
  std::sort(p.rbegin(), p.rend());
  return p;
}

}  // namespace

TEST_CASE("zero-noise polar samples lie on the curve") {
  const PolarCurve curve;
  const PointCloud cloud = polar_curve_sample(301, 0.0, 4);
  for (Eigen::Index i = 0; i < cloud.rows(); ++i) {
    const double rho = cloud.row(i).norm();
    const double r = polar_curve_radius(curve, std::atan2(cloud(i, 1), cloud(i, 0)));
    // A point with negative r(theta) is drawn at angle theta + pi, where r is unchanged.
    CHECK(std::min(std::abs(rho - r), std::abs(rho + r)) <= 1e-9);
  }
}

TEST_CASE("polar samples are seeded") {
  CHECK(polar_curve_sample(100, 0.001, 1) == polar_curve_sample(100, 0.001, 1));
  CHECK(polar_curve_sample(100, 0.001, 1) != polar_curve_sample(100, 0.001, 2));
  CHECK_THROWS_AS(polar_curve_sample(3, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(polar_curve_sample(10, -1.0, 1), ValidationError);
}

TEST_CASE("moderate noise leaves four prominent loops") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto pd = tilt(vr_persistence(polar_curve_sample(300, 0.001, seed), 1)[1]);
    const auto p = sorted_persistence(pd);
    REQUIRE(p.size() >= 5);
    CAPTURE(seed);
    CHECK(p[3] >= 3.0 * p[4]);
  }
}

TEST_CASE("noise-free loops come in two symmetric pairs") {
  for (int n : {400, 500}) {
    const PointCloud cloud = polar_curve_sample(n, 0.0, 2);
    const auto diagrams = vr_persistence(cloud, 1);
    // Features shorter than the sampling step are discretization artifacts.
    double step = 0.0;
    for (const auto& pair : diagrams[0].pairs) step = std::max(step, pair.death);
    std::map<double, int> multiplicity;
    for (const auto& x : tilt(diagrams[1]).points)
      if (x.y() > step) ++multiplicity[x.y()];
    CAPTURE(n);
    REQUIRE(multiplicity.size() == 2);
    for (const auto& [value, count] : multiplicity) CHECK(count == 2);
  }
}

TEST_CASE("network classes grow in loop size") {
  std::map<int, std::vector<double>> max_persistence;
  for (int cls : {1, 3})
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto pd = tilt(vr_persistence(loop_network_generate(cls, seed), 1, kLoopNetworkMaxRadius)[1]);
      const auto p = sorted_persistence(pd);
      max_persistence[cls].push_back(p.empty() ? 0.0 : p.front());
    }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };
  CHECK(median(max_persistence[3]) > median(max_persistence[1]));
}

TEST_CASE("network generator is seeded and validated") {
  CHECK(loop_network_generate(2, 5) == loop_network_generate(2, 5));
  CHECK(loop_network_generate(2, 5) != loop_network_generate(2, 6));
  CHECK_THROWS_AS(loop_network_generate(0, 1), ValidationError);
  CHECK_THROWS_AS(loop_network_generate(4, 1), ValidationError);
  LoopNetworkParams bad = loop_network_class(1);
  bad.spacing = 0.0;
  CHECK_THROWS_AS(loop_network_generate(bad, 1), ValidationError);
  const PointCloud cloud = loop_network_generate(1, 3);
  CHECK(cloud.cols() == 2);
  CHECK(cloud.rows() > 100);
}

#pragma once

// Shared deterministic fixtures for the unit and acceptance tests.

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pdbayes/classify.hpp"
#include "pdbayes/persistence.hpp"
#include "pdbayes/synthetic.hpp"

namespace fixtures {

using namespace pdbayes;

// Lemniscate of Bernoulli sampled at 30 half-step parameter values. With
// n = 2 mod 4 the samples straddle the crossing symmetrically, so the only
// cycles are the two lobes.
inline PointCloud figure_eight() {
  const int n = 30;
  PointCloud cloud(n, 2);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * (i + 0.5) / n;
    const double d = 1.0 + std::sin(t) * std::sin(t);
    cloud.row(i) << std::cos(t) / d, std::sin(t) * std::cos(t) / d;
  }
  return cloud;
}

inline PointCloud unit_square() {
  PointCloud cloud(4, 2);
  cloud << 0, 0, 1, 0, 1, 1, 0, 1;
  return cloud;
}

// Prior and model blocks of the filament-network study.
inline ModelConfig table3_model() {
  return {GaussianMixtureIntensity({{1.0, Point2(1.0, 2.0), 6.0}}),
          CardinalityPmf::binomial(BinomialCardinality(25, 24.0 / 25.0)), ObservationModel(0.95, 0.01),
          UnexpectedModel(1.0, BinomialCardinality(25, 2.0 / 25.0)), std::nullopt};
}

// H1 diagrams of `per_class` seeded network clouds per class, reduced to the
// k most persistent points.
inline std::vector<LabeledDiagram> loop_network_benchmark(int per_class, int k) {
  std::vector<LabeledDiagram> data;
  for (int cls = 1; cls <= 3; ++cls)
    for (int s = 0; s < per_class; ++s) {
      const PointCloud cloud = loop_network_generate(cls, 1000 * static_cast<std::uint64_t>(cls) + s);
      const auto pd = tilt(vr_persistence(cloud, 1, kLoopNetworkMaxRadius)[1]);
      data.push_back({std::to_string(cls), subsample_diagram(pd, k)});
    }
  return data;
}

inline PersistenceDiagram random_diagram(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PersistenceDiagram pd;
  for (int i = 0; i < n; ++i) pd.points.emplace_back(unit(rng), unit(rng));
  return pd;
}

// A classifier over 2..4 classes with small random training sets.
inline TrainedClassifier random_classifier(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int classes = 2 + static_cast<int>(rng() % 3);
  std::vector<GaussianComponent> comps;
  for (int l = 0; l < 1 + static_cast<int>(rng() % 3); ++l)
    comps.push_back({0.5 + unit(rng), Point2(unit(rng), unit(rng)), 0.02 + 0.2 * unit(rng)});
  const ModelConfig config{GaussianMixtureIntensity(comps), CardinalityPmf::binomial(BinomialCardinality(8, 0.3)),
                           ObservationModel(0.5 + 0.49 * unit(rng), 0.01 + 0.05 * unit(rng)),
                           UnexpectedModel(2.0 + 3.0 * unit(rng), BinomialCardinality(8, 0.2)), std::nullopt};
  std::map<std::string, std::vector<PersistenceDiagram>> training;
  for (int c = 0; c < classes; ++c)
    for (int i = 0; i < 2 + static_cast<int>(rng() % 2); ++i)
      training["class" + std::to_string(c)].push_back(random_diagram(rng, 1 + static_cast<int>(rng() % 3)));
  return fit(training, config, 0.5 + unit(rng));
}

}  // namespace fixtures

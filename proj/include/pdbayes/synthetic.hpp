#pragma once

#include <cstdint>

#include "pdbayes/persistence.hpp"

namespace pdbayes {

/// Polar curve r(theta) = scale * (offset + cos(2 theta)). For 0 < offset < 1
/// the arcs with r < 0 trace two inner loops, giving four 1-cycles in two
/// point-symmetric pairs.
struct PolarCurve {
  double offset = 0.1;
  double scale = 1.2;
};

/// n points spread evenly in arc length over the curve (seeded phase), the
/// second half the point reflection of the first, then perturbed by isotropic
/// Gaussian noise of variance `noise_var` per coordinate.
PointCloud polar_curve_sample(int n, double noise_var, std::uint64_t seed, const PolarCurve& curve = {});

/// Radius of the curve at angle theta.
double polar_curve_radius(const PolarCurve& curve, double theta);

/// Parameters of the segment-network generator for one class.
struct LoopNetworkParams {
  int lines = 10;          // random chords of the box
  double spacing = 0.1;    // arc-length step between samples along a chord
  int strands = 1;         // parallel copies of each chord (cable thickness)
  double strand_gap = 0.0; // offset between parallel copies
  double noise_sigma = 0.01;
  double box = 4.0;
  double angle_jitter = 0.2;     // radians, around the horizontal/vertical directions
  double position_jitter = 0.6;  // fraction of the stratum width
};

/// Filtration cutoff for network clouds. Cells of the built-in classes die
/// below it; larger values only add run time.
inline constexpr double kLoopNetworkMaxRadius = 2.0;

/// Built-in parameters for classes 1..3: class 1 has many small loops, class 3
/// fewer and larger loops drawn as thicker cables.
LoopNetworkParams loop_network_class(int class_id);

/// Points along a planar network of random chords of a square box, alternating
/// between near-horizontal and near-vertical directions.
PointCloud loop_network_generate(int class_id, std::uint64_t seed);
PointCloud loop_network_generate(const LoopNetworkParams& params, std::uint64_t seed);

}  // namespace pdbayes

#include "pdbayes/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pdbayes/errors.hpp"

namespace pdbayes {

namespace {

constexpr int kArcTableSteps = 20000;

Eigen::Vector2d curve_point(const PolarCurve& curve, double theta) {
  const double r = polar_curve_radius(curve, theta);
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

double polar_curve_radius(const PolarCurve& curve, double theta) {
  return curve.scale * (curve.offset + std::cos(2.0 * theta));
}

PointCloud polar_curve_sample(int n, double noise_var, std::uint64_t seed, const PolarCurve& curve) {
  if (n < 4) throw ValidationError("polar curve sample needs at least 4 points");
  if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) throw ValidationError("noise variance must be >= 0");
  if (!(curve.scale > 0.0)) throw ValidationError("curve scale must be positive");

  // Cumulative arc length over theta in [0, pi]; the curve is symmetric
  // under theta -> theta + pi (point reflection).
  const double pi = std::numbers::pi;
  std::vector<double> theta(kArcTableSteps + 1), arc(kArcTableSteps + 1, 0.0);
  auto speed = [&](double t) {
    const double r = polar_curve_radius(curve, t);
    const double dr = -2.0 * curve.scale * std::sin(2.0 * t);
    return std::hypot(r, dr);
  };
  for (int i = 0; i <= kArcTableSteps; ++i) {
    theta[i] = pi * i / kArcTableSteps;
    if (i > 0) arc[i] = arc[i - 1] + 0.5 * (speed(theta[i - 1]) + speed(theta[i])) * (theta[i] - theta[i - 1]);
  }
  const double half_length = arc.back();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double phase = unit(rng);
  const int half = n / 2;
  auto theta_at = [&](double s) {
    const auto it = std::upper_bound(arc.begin(), arc.end(), s);
    const auto hi = std::clamp<std::ptrdiff_t>(it - arc.begin(), 1, kArcTableSteps);
    const double w = (s - arc[hi - 1]) / (arc[hi] - arc[hi - 1]);
    return theta[hi - 1] + w * (theta[hi] - theta[hi - 1]);
  };

  PointCloud cloud(n, 2);
  for (int i = 0; i < half; ++i) {
    const Eigen::Vector2d p = curve_point(curve, theta_at((i + phase) * half_length / half));
    cloud.row(i) = p.transpose();
    cloud.row(half + i) = -p.transpose();
  }
  if (n % 2 == 1) cloud.row(n - 1) = curve_point(curve, 2.0 * pi * unit(rng)).transpose();

  if (noise_var > 0.0) {
    std::normal_distribution<double> noise(0.0, std::sqrt(noise_var));
    for (Eigen::Index i = 0; i < cloud.rows(); ++i)
      for (Eigen::Index j = 0; j < 2; ++j) cloud(i, j) += noise(rng);
  }
  return cloud;
}

LoopNetworkParams loop_network_class(int class_id) {
  switch (class_id) {
    case 1: return {14, 0.12, 1, 0.0, 0.015, 4.0};
    case 2: return {9, 0.12, 1, 0.0, 0.015, 4.0};
    case 3: return {6, 0.1, 2, 0.06, 0.015, 4.0};
    default:
      throw ValidationError("loop network class must be 1, 2 or 3 (got " + std::to_string(class_id) + ")");
  }
}

PointCloud loop_network_generate(int class_id, std::uint64_t seed) {
  return loop_network_generate(loop_network_class(class_id), seed);
}

PointCloud loop_network_generate(const LoopNetworkParams& params, std::uint64_t seed) {
  if (params.lines < 1 || params.strands < 1) throw ValidationError("network needs at least one line and strand");
  if (!(params.spacing > 0.0) || !(params.box > 0.0)) throw ValidationError("spacing and box must be positive");
  if (!(params.noise_sigma >= 0.0)) throw ValidationError("noise must be non-negative");
  if (!(params.angle_jitter >= 0.0) || !(params.position_jitter >= 0.0))
    throw ValidationError("jitter must be non-negative");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, params.noise_sigma);
  const double box = params.box;
  const Eigen::Vector2d centre(box / 2, box / 2);

  std::vector<Eigen::Vector2d> points;
  for (int line = 0; line < params.lines; ++line) {
    // Alternate near-horizontal and near-vertical chords. Offsets within a
    // family are stratified over the box, so cell size tracks the line count.
    const int family = line % 2;
    const int family_size = (params.lines + 1 - family) / 2;
    const double slot = (line / 2 + 0.5 + params.position_jitter * (unit(rng) - 0.5)) * box / family_size;
    const double along = box * unit(rng);
    const double angle = family * std::numbers::pi / 2 + params.angle_jitter * (2.0 * unit(rng) - 1.0);
    const Eigen::Vector2d anchor = family == 0 ? Eigen::Vector2d(along, slot) : Eigen::Vector2d(slot, along);
    const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
    const Eigen::Vector2d normal(-dir.y(), dir.x());

    for (int strand = 0; strand < params.strands; ++strand) {
      const double shift = (strand - 0.5 * (params.strands - 1)) * params.strand_gap;
      const Eigen::Vector2d base = anchor + shift * normal;
      // Clip base + t * dir to the box.
      double t_lo = -1e300, t_hi = 1e300;
      for (int axis = 0; axis < 2; ++axis) {
        if (std::abs(dir(axis)) < 1e-12) {
          if (base(axis) < 0.0 || base(axis) > box) t_hi = t_lo - 1.0;
          continue;
        }
        double a = (0.0 - base(axis)) / dir(axis);
        double b = (box - base(axis)) / dir(axis);
        if (a > b) std::swap(a, b);
        t_lo = std::max(t_lo, a);
        t_hi = std::min(t_hi, b);
      }
      if (t_hi <= t_lo) continue;
      const double start = t_lo + params.spacing * unit(rng);
      for (double t = start; t <= t_hi; t += params.spacing) {
        Eigen::Vector2d p = base + t * dir;
        p.x() += noise(rng);
        p.y() += noise(rng);
        points.push_back(p);
      }
    }
  }
  if (points.empty()) points.push_back(centre);

  PointCloud cloud(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) cloud.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  return cloud;
}

}  // namespace pdbayes

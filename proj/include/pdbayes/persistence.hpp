#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace pdbayes {

/// A point cloud stores one point per row.
using PointCloud = Eigen::MatrixXd;

/// A point of the wedge W = {(b, p) : b, p >= 0}, stored as (birth, persistence).
using Point2 = Eigen::Vector2d;

struct BirthDeathPair {
  double birth = 0.0;
  double death = 0.0;

  friend bool operator==(const BirthDeathPair&, const BirthDeathPair&) = default;
};

/// Untilted diagram of one homology dimension. Features still alive at
/// `max_radius` are listed in `essential` by birth value.
struct BirthDeathDiagram {
  int dim = 0;
  std::vector<BirthDeathPair> pairs;
  std::vector<double> essential;
  double max_radius = 0.0;
};

/// Tilted diagram: a multiset of (birth, persistence) points in W.
struct PersistenceDiagram {
  int dim = 1;
  std::vector<Point2> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

enum class SubsampleStrategy { TopPersistence, UniformRandom };

/// Throws ValidationError if the cloud is empty or contains non-finite values.
void validate_point_cloud(const PointCloud& cloud);

/// Euclidean distance matrix of the rows of `cloud`.
Eigen::MatrixXd pairwise_distances(const PointCloud& cloud);

/// Vietoris-Rips persistence over Z/2 in dimensions 0..max_dim (max_dim <= 1).
///
/// An edge {i,j} enters at d(i,j); a triangle enters with its longest edge.
/// Simplices are totally ordered by (filtration value, dimension,
/// lexicographic vertex tuple). Pairs with death == birth are not reported.
/// `max_radius` defaults to the largest pairwise distance.
std::vector<BirthDeathDiagram> vr_persistence(const PointCloud& cloud, int max_dim,
                                              std::optional<double> max_radius = std::nullopt);

/// Maps (b, d) to (b, d - b). Essential features are capped at max_radius.
PersistenceDiagram tilt(const BirthDeathDiagram& diagram);

/// Keeps at most k points. TopPersistence keeps the k most persistent points
/// (ties: smaller birth first, then input order); UniformRandom draws without
/// replacement from a generator seeded with `seed`. Kept points retain their
/// input order.
PersistenceDiagram subsample_diagram(const PersistenceDiagram& pd, int k,
                                     SubsampleStrategy strategy = SubsampleStrategy::TopPersistence,
                                     std::uint64_t seed = 0);

/// True if every point lies in W with finite coordinates.
bool in_wedge(const Point2& x);

/// Throws ValidationError naming the first point outside W.
void validate_diagram(const PersistenceDiagram& pd);

}  // namespace pdbayes

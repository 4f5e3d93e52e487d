#include "pdbayes/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <tuple>
#include <unordered_map>

#include "pdbayes/errors.hpp"

namespace pdbayes {

namespace {

struct Edge {
  double diam;
  std::uint32_t i, j;  // i < j

  auto key() const { return std::tie(diam, i, j); }
  bool operator<(const Edge& o) const { return key() < o.key(); }
};

struct Triangle {
  double diam;
  std::uint32_t a, b, c;  // a < b < c

  auto key() const { return std::tie(diam, a, b, c); }
  bool operator<(const Triangle& o) const { return key() < o.key(); }
  bool operator>(const Triangle& o) const { return o < *this; }
  bool operator==(const Triangle& o) const { return a == o.a && b == o.b && c == o.c; }
};

using TriangleHeap = std::priority_queue<Triangle, std::vector<Triangle>, std::greater<>>;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The root of a component is its smallest vertex index, i.e. its oldest vertex.
  void link(std::uint32_t older, std::uint32_t younger) { parent_[younger] = older; }

 private:
  std::vector<std::uint32_t> parent_;
};

// Cohomology reduction of the edge -> triangle coboundary matrix, processed
// in decreasing filtration order. The pairs coincide with those of the
// homology boundary-matrix reduction under the same total order.
class CoboundaryReducer {
 public:
  CoboundaryReducer(const Eigen::MatrixXd& dist, double max_radius)
      : dist_(dist), n_(static_cast<std::uint32_t>(dist.rows())), max_radius_(max_radius) {}

  std::uint64_t code(const Triangle& t) const {
    return (static_cast<std::uint64_t>(t.a) * n_ + t.b) * n_ + t.c;
  }

  template <class Visit>
  void for_each_coface(const Edge& e, Visit&& visit) const {
    for (std::uint32_t k = 0; k < n_; ++k) {
      if (k == e.i || k == e.j) continue;
      const double diam = std::max({e.diam, dist_(e.i, k), dist_(e.j, k)});
      if (diam > max_radius_) continue;
      std::uint32_t v[3] = {e.i, e.j, k};
      std::sort(v, v + 3);
      visit(Triangle{diam, v[0], v[1], v[2]});
    }
  }

  std::optional<Triangle> min_coface(const Edge& e) const {
    std::optional<Triangle> best;
    for_each_coface(e, [&](const Triangle& t) {
      if (!best || t < *best) best = t;
    });
    return best;
  }

  // Pops cancelling duplicates off the top; leaves the pivot in place.
  static std::optional<Triangle> pivot(TriangleHeap& heap) {
    while (!heap.empty()) {
      const Triangle top = heap.top();
      heap.pop();
      int count = 1;
      while (!heap.empty() && heap.top() == top) {
        heap.pop();
        ++count;
      }
      if (count % 2 == 1) {
        heap.push(top);
        return top;
      }
    }
    return std::nullopt;
  }

  // `columns` must be in decreasing filtration order.
  void reduce(const std::vector<Edge>& edges, const std::vector<std::uint32_t>& columns,
              std::vector<BirthDeathPair>& pairs, std::vector<double>& essential) {
    std::unordered_map<std::uint64_t, std::uint32_t> owner;  // pivot -> column slot
    std::vector<std::vector<std::uint32_t>> reduction(columns.size());

    for (std::uint32_t slot = 0; slot < columns.size(); ++slot) {
      const Edge& e = edges[columns[slot]];

      std::optional<Triangle> piv = min_coface(e);
      if (piv && !owner.contains(code(*piv))) {
        owner.emplace(code(*piv), slot);
        reduction[slot] = {columns[slot]};
        if (piv->diam > e.diam) pairs.push_back({e.diam, piv->diam});
        continue;
      }

      TriangleHeap heap;
      std::vector<std::uint32_t> combo{columns[slot]};
      for_each_coface(e, [&](const Triangle& t) { heap.push(t); });

      while ((piv = pivot(heap))) {
        auto it = owner.find(code(*piv));
        if (it == owner.end()) break;
        for (std::uint32_t f : reduction[it->second]) {
          combo.push_back(f);
          for_each_coface(edges[f], [&](const Triangle& t) { heap.push(t); });
        }
      }

      if (!piv) {
        essential.push_back(e.diam);
        continue;
      }
      std::sort(combo.begin(), combo.end());
      std::vector<std::uint32_t> odd;
      for (std::size_t k = 0; k < combo.size();) {
        std::size_t run = k;
        while (run < combo.size() && combo[run] == combo[k]) ++run;
        if ((run - k) % 2 == 1) odd.push_back(combo[k]);
        k = run;
      }
      reduction[slot] = std::move(odd);
      owner.emplace(code(*piv), slot);
      if (piv->diam > e.diam) pairs.push_back({e.diam, piv->diam});
    }
  }

 private:
  const Eigen::MatrixXd& dist_;
  std::uint32_t n_;
  double max_radius_;
};

}  // namespace

void validate_point_cloud(const PointCloud& cloud) {
  if (cloud.rows() < 1 || cloud.cols() < 1) throw ValidationError("point cloud is empty");
  if (!cloud.allFinite()) throw ValidationError("point cloud contains non-finite coordinates");
}

Eigen::MatrixXd pairwise_distances(const PointCloud& cloud) {
  validate_point_cloud(cloud);
  const Eigen::Index n = cloud.rows();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (cloud.row(i) - cloud.row(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

std::vector<BirthDeathDiagram> vr_persistence(const PointCloud& cloud, int max_dim,
                                              std::optional<double> max_radius) {
  if (max_dim < 0 || max_dim > 1)
    throw ValidationError("unsupported homology dimension " + std::to_string(max_dim) +
                          " (only 0 and 1)");
  const Eigen::MatrixXd dist = pairwise_distances(cloud);
  if (!dist.allFinite()) throw ValidationError("non-finite pairwise distance");
  if (max_radius && !(*max_radius > 0.0 && std::isfinite(*max_radius)))
    throw ValidationError("max_radius must be positive and finite");
  const double radius = max_radius.value_or(dist.maxCoeff());
  const auto n = static_cast<std::uint32_t>(dist.rows());

  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (dist(i, j) <= radius) edges.push_back({dist(i, j), i, j});
  std::sort(edges.begin(), edges.end());

  std::vector<BirthDeathDiagram> result;
  BirthDeathDiagram h0{0, {}, {}, radius};
  std::vector<std::uint32_t> positive;  // edges that create a cycle
  UnionFind components(n);
  for (std::uint32_t idx = 0; idx < edges.size(); ++idx) {
    const Edge& e = edges[idx];
    const std::uint32_t ri = components.find(e.i);
    const std::uint32_t rj = components.find(e.j);
    if (ri == rj) {
      positive.push_back(idx);
      continue;
    }
    components.link(std::min(ri, rj), std::max(ri, rj));
    if (e.diam > 0.0) h0.pairs.push_back({0.0, e.diam});
  }
  for (std::uint32_t v = 0; v < n; ++v)
    if (components.find(v) == v) h0.essential.push_back(0.0);
  result.push_back(std::move(h0));

  if (max_dim >= 1) {
    BirthDeathDiagram h1{1, {}, {}, radius};
    std::reverse(positive.begin(), positive.end());
    CoboundaryReducer reducer(dist, radius);
    reducer.reduce(edges, positive, h1.pairs, h1.essential);
    result.push_back(std::move(h1));
  }
  return result;
}

PersistenceDiagram tilt(const BirthDeathDiagram& diagram) {
  PersistenceDiagram pd;
  pd.dim = diagram.dim;
  pd.points.reserve(diagram.pairs.size() + diagram.essential.size());
  for (const auto& [birth, death] : diagram.pairs) pd.points.emplace_back(birth, death - birth);
  for (double birth : diagram.essential)
    pd.points.emplace_back(birth, std::max(0.0, diagram.max_radius - birth));
  return pd;
}

PersistenceDiagram subsample_diagram(const PersistenceDiagram& pd, int k, SubsampleStrategy strategy,
                                     std::uint64_t seed) {
  if (k < 1) throw ValidationError("subsample size must be at least 1");
  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(k), pd.size());
  std::vector<std::size_t> order(pd.size());
  std::iota(order.begin(), order.end(), 0);

  if (strategy == SubsampleStrategy::TopPersistence) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const Point2& x = pd.points[a];
      const Point2& y = pd.points[b];
      if (x.y() != y.y()) return x.y() > y.y();
      return x.x() < y.x();
    });
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < keep; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
      std::swap(order[i], order[pick(rng)]);
    }
  }
  order.resize(keep);
  std::sort(order.begin(), order.end());

  PersistenceDiagram out;
  out.dim = pd.dim;
  for (std::size_t i : order) out.points.push_back(pd.points[i]);
  return out;
}

bool in_wedge(const Point2& x) { return x.allFinite() && x.x() >= 0.0 && x.y() >= 0.0; }

void validate_diagram(const PersistenceDiagram& pd) {
  for (std::size_t i = 0; i < pd.points.size(); ++i) {
    if (!in_wedge(pd.points[i]))
      throw ValidationError("diagram point " + std::to_string(i) + " (" +
                            std::to_string(pd.points[i].x()) + ", " +
                            std::to_string(pd.points[i].y()) + ") lies outside the wedge");
  }
}

}  // namespace pdbayes

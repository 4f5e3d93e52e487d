#pragma once

#include <optional>

#include <Eigen/Core>

namespace pdbayes {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Elementary symmetric polynomials e_0..e_K of the K entries of `values`,
/// by the recurrence e_j <- e_j + v * e_{j-1}. e_0 = 1, also for K = 0.
template <typename Derived>
VectorX<typename Derived::Scalar> elementary_symmetric(const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index count = values.size();
  VectorX<Scalar> e = VectorX<Scalar>::Zero(count + 1);
  e(0) = Scalar(1);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Scalar v = values(i);
    for (Eigen::Index j = i + 1; j >= 1; --j) e(j) += v * e(j - 1);
  }
  return e;
}

/// Given e = elementary_symmetric(values) and one entry `removed` of values,
/// returns the polynomials of the remaining K-1 entries via the forward
/// downdate f_k = e_k - removed * f_{k-1}. Returns nullopt when a step loses
/// more than `min_keep` of its relative magnitude to cancellation; callers
/// should then recompute from scratch.
template <typename Derived>
std::optional<VectorX<typename Derived::Scalar>> downdate_elementary_symmetric(
    const Eigen::MatrixBase<Derived>& e, typename Derived::Scalar removed,
    typename Derived::Scalar min_keep = typename Derived::Scalar(1e-3)) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index count = e.size() - 1;
  if (count < 1) return std::nullopt;
  VectorX<Scalar> f(count);
  f(0) = Scalar(1);
  for (Eigen::Index k = 1; k < count; ++k) {
    const Scalar ek = e(k);
    const Scalar fk = ek - removed * f(k - 1);
    if (fk < Scalar(0) || (ek > Scalar(0) && fk < min_keep * ek)) return std::nullopt;
    f(k) = fk;
  }
  // The last identity e_K = removed * f_{K-1} is a free consistency check.
  const Scalar last = e(count);
  const Scalar predicted = removed * f(count - 1);
  using std::abs;
  if (abs(last - predicted) > Scalar(1e-8) * (abs(last) + abs(predicted))) return std::nullopt;
  return f;
}

}  // namespace pdbayes

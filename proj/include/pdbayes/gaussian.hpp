#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace pdbayes {

// Isotropic bivariate Gaussian helpers. Throughout, `variance` is the scalar
// s of the covariance s*I (not a standard deviation).

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Density of N(mean, variance*I) at x.
template <typename DerivedX, typename DerivedM>
typename DerivedX::Scalar isotropic_normal_pdf(const Eigen::MatrixBase<DerivedX>& x,
                                               const Eigen::MatrixBase<DerivedM>& mean,
                                               typename DerivedX::Scalar variance) {
  using Scalar = typename DerivedX::Scalar;
  const Scalar sq = (x - mean).squaredNorm();
  return std::exp(-sq / (Scalar(2) * variance)) / (Scalar(2) * std::numbers::pi_v<Scalar> * variance);
}

/// log of isotropic_normal_pdf; finite even where the density underflows.
template <typename DerivedX, typename DerivedM>
typename DerivedX::Scalar isotropic_normal_logpdf(const Eigen::MatrixBase<DerivedX>& x,
                                                  const Eigen::MatrixBase<DerivedM>& mean,
                                                  typename DerivedX::Scalar variance) {
  using Scalar = typename DerivedX::Scalar;
  const Scalar sq = (x - mean).squaredNorm();
  return -sq / (Scalar(2) * variance) - std::log(Scalar(2) * std::numbers::pi_v<Scalar> * variance);
}

/// Standard normal CDF.
template <typename Scalar>
Scalar normal_cdf(Scalar z) {
  return Scalar(0.5) * std::erfc(-z / std::numbers::sqrt2_v<Scalar>);
}

/// Mass of N(mean, variance*I) on the closed first quadrant [0, inf)^2.
template <typename Derived>
typename Derived::Scalar quadrant_mass(const Eigen::MatrixBase<Derived>& mean,
                                       typename Derived::Scalar variance) {
  using std::sqrt;
  const auto sd = sqrt(variance);
  return normal_cdf(mean(0) / sd) * normal_cdf(mean(1) / sd);
}

/// Parameters of the product N(y; x, obs_var*I) * N(x; prior_mean, prior_var*I)
/// viewed as a function of x: it equals scale * N(x; mean, variance*I).
template <typename Scalar>
struct GaussianProduct {
  Scalar scale;
  Vector2<Scalar> mean;
  Scalar variance;
};

template <typename DerivedY, typename DerivedM>
GaussianProduct<typename DerivedY::Scalar> gaussian_product(const Eigen::MatrixBase<DerivedY>& y,
                                                            typename DerivedY::Scalar obs_var,
                                                            const Eigen::MatrixBase<DerivedM>& prior_mean,
                                                            typename DerivedY::Scalar prior_var) {
  using Scalar = typename DerivedY::Scalar;
  const Scalar total = obs_var + prior_var;
  return {isotropic_normal_pdf(y, prior_mean, total),
          ((prior_var * y + obs_var * prior_mean) / total).eval(),
          obs_var * prior_var / total};
}

}  // namespace pdbayes

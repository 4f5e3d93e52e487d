#pragma once

#include <vector>

#include <Eigen/Core>

#include "pdbayes/persistence.hpp"

namespace pdbayes {

/// One term c * N(x; mean, variance*I) of a Gaussian-mixture intensity.
struct GaussianComponent {
  double weight = 1.0;
  Point2 mean = Point2::Zero();
  double variance = 1.0;
};

/// Intensity sum_l c_l N*(x; mu_l, sigma_l I) on W. Densities are restricted
/// to W by the indicator only; they are not renormalized.
class GaussianMixtureIntensity {
 public:
  GaussianMixtureIntensity() = default;
  explicit GaussianMixtureIntensity(std::vector<GaussianComponent> components);

  const std::vector<GaussianComponent>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  double operator()(const Point2& x) const;

  /// Integral of the intensity over W.
  double mass_on_wedge() const;

 private:
  std::vector<GaussianComponent> components_;
};

struct BinomialCardinality {
  int n_max = 0;
  double p = 0.0;

  BinomialCardinality() = default;
  BinomialCardinality(int n_max, double p);
};

/// Detection probability (constant) and likelihood-kernel variance.
struct ObservationModel {
  double alpha = 1.0;
  double sigma_yo = 1.0;

  ObservationModel() = default;
  ObservationModel(double alpha, double sigma_yo);
};

/// Spurious features: intensity mu^2 exp(-mu (b + p)) and binomial cardinality.
struct UnexpectedModel {
  double mu_yu = 1.0;
  BinomialCardinality cardinality;

  UnexpectedModel() = default;
  UnexpectedModel(double mu_yu, BinomialCardinality cardinality);
};

struct IidClusterPrior {
  GaussianMixtureIntensity intensity;
  BinomialCardinality cardinality;
};

/// Prior intensity at x; x must lie in W.
double eval_prior_intensity(const IidClusterPrior& prior, const Point2& x);
double eval_prior_intensity(const GaussianMixtureIntensity& intensity, const Point2& x);

/// Binomial probability of n; 0 outside [0, n_max]. Evaluated through lgamma.
double binomial_pmf(const BinomialCardinality& card, int n);

/// log of binomial_pmf, -inf where the probability is zero.
double binomial_logpmf(const BinomialCardinality& card, int n);

/// Full pmf vector over 0..n_max.
Eigen::VectorXd binomial_pmf_vector(const BinomialCardinality& card);

double unexpected_intensity(const UnexpectedModel& model, const Point2& y);
double unexpected_log_intensity(const UnexpectedModel& model, const Point2& y);

/// Mass of N(mean, sigma*I) on W.
double truncated_gaussian_mass(const Point2& mean, double sigma);

/// The linear functional lambda[1 - alpha] = (1 - alpha) * integral_W lambda.
double vanished_mass(const GaussianMixtureIntensity& intensity, const ObservationModel& obs);

/// log C(n, k) via lgamma.
double log_binomial_coefficient(int n, int k);

}  // namespace pdbayes

#include "pdbayes/pointprocess.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pdbayes/errors.hpp"
#include "pdbayes/gaussian.hpp"

namespace pdbayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_in_wedge(const Point2& x, const char* what) {
  if (!in_wedge(x))
    throw ValidationError(std::string(what) + ": point (" + std::to_string(x.x()) + ", " +
                          std::to_string(x.y()) + ") lies outside the wedge");
}

}  // namespace

GaussianMixtureIntensity::GaussianMixtureIntensity(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  for (std::size_t l = 0; l < components_.size(); ++l) {
    const auto& c = components_[l];
    const std::string tag = "mixture component " + std::to_string(l);
    if (!(c.weight > 0.0) || !std::isfinite(c.weight))
      throw ValidationError(tag + ": weight must be positive");
    if (!(c.variance > 0.0) || !std::isfinite(c.variance))
      throw ValidationError(tag + ": variance must be positive");
    if (!c.mean.allFinite()) throw ValidationError(tag + ": mean must be finite");
  }
}

double GaussianMixtureIntensity::operator()(const Point2& x) const {
  double sum = 0.0;
  for (const auto& c : components_) sum += c.weight * isotropic_normal_pdf(x, c.mean, c.variance);
  return sum;
}

double GaussianMixtureIntensity::mass_on_wedge() const {
  double mass = 0.0;
  for (const auto& c : components_) mass += c.weight * truncated_gaussian_mass(c.mean, c.variance);
  return mass;
}

BinomialCardinality::BinomialCardinality(int n_max_, double p_) : n_max(n_max_), p(p_) {
  if (n_max < 0) throw ValidationError("binomial n_max must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binomial probability must lie in [0, 1]");
}

ObservationModel::ObservationModel(double alpha_, double sigma_yo_) : alpha(alpha_), sigma_yo(sigma_yo_) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  if (!(sigma_yo > 0.0) || !std::isfinite(sigma_yo)) throw ValidationError("sigma_yo must be positive");
}

UnexpectedModel::UnexpectedModel(double mu_yu_, BinomialCardinality cardinality_)
    : mu_yu(mu_yu_), cardinality(cardinality_) {
  if (!(mu_yu > 0.0) || !std::isfinite(mu_yu)) throw ValidationError("mu_yu must be positive");
}

double eval_prior_intensity(const GaussianMixtureIntensity& intensity, const Point2& x) {
  require_in_wedge(x, "prior intensity");
  return intensity(x);
}

double eval_prior_intensity(const IidClusterPrior& prior, const Point2& x) {
  return eval_prior_intensity(prior.intensity, x);
}

double log_binomial_coefficient(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_logpmf(const BinomialCardinality& card, int n) {
  if (n < 0 || n > card.n_max) return kNegInf;
  const int rest = card.n_max - n;
  // 0 * log(0) terms are taken as 0.
  double log_p = 0.0;
  if (n > 0) {
    if (card.p == 0.0) return kNegInf;
    log_p += n * std::log(card.p);
  }
  if (rest > 0) {
    if (card.p == 1.0) return kNegInf;
    log_p += rest * std::log1p(-card.p);
  }
  return log_binomial_coefficient(card.n_max, n) + log_p;
}

double binomial_pmf(const BinomialCardinality& card, int n) { return std::exp(binomial_logpmf(card, n)); }

Eigen::VectorXd binomial_pmf_vector(const BinomialCardinality& card) {
  Eigen::VectorXd pmf(card.n_max + 1);
  for (int n = 0; n <= card.n_max; ++n) pmf(n) = binomial_pmf(card, n);
  return pmf;
}

double unexpected_log_intensity(const UnexpectedModel& model, const Point2& y) {
  require_in_wedge(y, "unexpected intensity");
  return 2.0 * std::log(model.mu_yu) - model.mu_yu * (y.x() + y.y());
}

double unexpected_intensity(const UnexpectedModel& model, const Point2& y) {
  return std::exp(unexpected_log_intensity(model, y));
}

double truncated_gaussian_mass(const Point2& mean, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("variance must be positive");
  return quadrant_mass(mean, sigma);
}

double vanished_mass(const GaussianMixtureIntensity& intensity, const ObservationModel& obs) {
  return (1.0 - obs.alpha) * intensity.mass_on_wedge();
}

}  // namespace pdbayes

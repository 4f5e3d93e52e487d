#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pdbayes/persistence.hpp"
#include "pdbayes/pointprocess.hpp"

namespace pdbayes {

/// Cardinality distribution on 0..n_max. Entries are non-negative and sum to 1.
class CardinalityPmf {
 public:
  CardinalityPmf() : probs_(Eigen::VectorXd::Ones(1)) {}
  explicit CardinalityPmf(Eigen::VectorXd probs);

  static CardinalityPmf binomial(const BinomialCardinality& card);
  static CardinalityPmf uniform(int n_max);

  const Eigen::VectorXd& probs() const { return probs_; }
  int n_max() const { return static_cast<int>(probs_.size()) - 1; }
  double operator()(int n) const { return (n < 0 || n > n_max()) ? 0.0 : probs_(n); }

  /// Same distribution on 0..n_max. Throws if mass would be dropped.
  CardinalityPmf resized(int n_max) const;

 private:
  Eigen::VectorXd probs_;
};

/// Posterior intensity
///   vanished_scale * prior(x) + sum_j C_j N*(x; mu_j, sigma_j I)
/// averaged over the m observed diagrams (the 1/m is already folded into
/// vanished_scale and every C_j), together with the posterior cardinality.
struct PosteriorDistribution {
  GaussianMixtureIntensity prior_intensity;
  double vanished_scale = 0.0;
  std::vector<GaussianComponent> observed_components;
  CardinalityPmf cardinality;
  int m = 0;
};

struct CardinalityStats {
  double mean = 0.0;
  double variance = 0.0;
  int map = 0;
};

/// q_l(y) = N(y; mu_l, (sigma_yo + sigma_l) I).
double marginal_q(const GaussianComponent& component, const ObservationModel& obs, const Point2& y);

/// nu_y = alpha * sum_l c_l q_l(y) / lambda_U(y), in diagram order.
Eigen::VectorXd nu_values(const PersistenceDiagram& diagram, const GaussianMixtureIntensity& prior,
                          const ObservationModel& obs, const UnexpectedModel& unexpected);

/// log of the combinatorial sum
///   sum_{k=0}^{min(K-a, tau)} (K-k-a)! P(tau, k+b) rho_U(K-k-a) lam^(tau-k-b) e_{K-a,k}
/// with P(tau, j) = tau!/(tau-j)! (zero for j > tau) and 0^0 = 1.
/// `log_e` holds log e_{K-a,k} for k = 0..K-a (-inf for zero entries).
/// Returns -inf when the sum is zero.
double log_gamma_term(int a, int b, int tau, int K, std::span<const double> log_e,
                      const BinomialCardinality& unexpected_card, double lam_one_minus_alpha);

/// exp(log_gamma_term) for plain (non-log) elementary symmetric values.
double gamma_term(int a, int b, int tau, int K, const Eigen::VectorXd& e,
                  const BinomialCardinality& unexpected_card, double lam_one_minus_alpha);

/// Closed-form posterior for a Gaussian-mixture prior intensity and an
/// arbitrary prior cardinality pmf, given m independent observed diagrams.
/// The cardinality is truncated at n_max (default: the prior pmf's support).
/// Throws NumericalError if an observation has zero likelihood under the model.
PosteriorDistribution compute_posterior(const GaussianMixtureIntensity& prior_intensity,
                                        const CardinalityPmf& prior_cardinality,
                                        const ObservationModel& obs, const UnexpectedModel& unexpected,
                                        std::span<const PersistenceDiagram> observations,
                                        std::optional<int> n_max = std::nullopt);

/// Binomial-prior overload; n_max defaults to the prior's N0.
PosteriorDistribution compute_posterior(const IidClusterPrior& prior, const ObservationModel& obs,
                                        const UnexpectedModel& unexpected,
                                        std::span<const PersistenceDiagram> observations,
                                        std::optional<int> n_max = std::nullopt);

CardinalityStats posterior_cardinality_stats(const PosteriorDistribution& post);
CardinalityStats cardinality_stats(const CardinalityPmf& pmf);

/// Posterior intensity at x in W.
double eval_posterior_intensity(const PosteriorDistribution& post, const Point2& x);

/// log of the posterior intensity, evaluated by log-sum-exp over components.
double log_posterior_intensity(const PosteriorDistribution& post, const Point2& x);

/// log rho_post(|D|) + sum_d log lambda_post(d); -inf if either factor vanishes.
/// Throws ValidationError if |D| exceeds the cardinality truncation.
double diagram_log_density(const PosteriorDistribution& post, const PersistenceDiagram& diagram);

/// Posterior intensity on an nb x np grid spanning [0, b_max] x [0, p_max]
/// (endpoints included), one row (b, p, value) per node, birth-major.
/// Values are divided by their maximum when `normalize` is set.
Eigen::MatrixXd intensity_grid(const PosteriorDistribution& post, double b_max, double p_max, int nb, int np,
                               bool normalize = true);

/// Strict local maxima of an intensity grid as returned by intensity_grid
/// (8-neighbourhood, interior and boundary nodes).
std::vector<Point2> grid_local_maxima(const Eigen::MatrixXd& grid, int nb, int np);

}  // namespace pdbayes

#include "pdbayes/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdbayes/elementary_symmetric.hpp"
#include "pdbayes/errors.hpp"
#include "pdbayes/gaussian.hpp"

namespace pdbayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> terms) {
  double top = kNegInf;
  for (double t : terms) top = std::max(top, t);
  if (top == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

double log_inner(const Eigen::VectorXd& log_rho, const std::vector<double>& log_gamma) {
  std::vector<double> terms(log_gamma.size());
  for (std::size_t n = 0; n < terms.size(); ++n) terms[n] = log_rho(static_cast<Eigen::Index>(n)) + log_gamma[n];
  return log_sum_exp(terms);
}

// log e_k of a non-negative vector, computed on values scaled by their
// maximum so the recurrence stays in range.
std::vector<double> log_elementary_symmetric(const Eigen::VectorXd& log_values) {
  const Eigen::Index count = log_values.size();
  std::vector<double> out(static_cast<std::size_t>(count) + 1, kNegInf);
  out[0] = 0.0;
  if (count == 0) return out;
  const double log_scale = log_values.maxCoeff();
  if (log_scale == kNegInf) return out;
  const Eigen::VectorXd scaled = (log_values.array() - log_scale).exp().matrix();
  const Eigen::VectorXd e = elementary_symmetric(scaled);
  for (Eigen::Index k = 0; k <= count; ++k)
    out[static_cast<std::size_t>(k)] = e(k) > 0.0 ? std::log(e(k)) + static_cast<double>(k) * log_scale : kNegInf;
  return out;
}

// log e_k of log_values with entry `skip` removed. Uses the downdate of the
// full scaled polynomials when it is well conditioned.
std::vector<double> log_elementary_symmetric_without(const Eigen::VectorXd& log_values,
                                                     const Eigen::VectorXd& scaled_e, double log_scale,
                                                     Eigen::Index skip) {
  const Eigen::Index count = log_values.size();
  if (log_scale != kNegInf) {
    const double removed = std::exp(log_values(skip) - log_scale);
    if (auto f = downdate_elementary_symmetric(scaled_e, removed)) {
      std::vector<double> out(static_cast<std::size_t>(count), kNegInf);
      for (Eigen::Index k = 0; k < count; ++k)
        out[static_cast<std::size_t>(k)] =
            (*f)(k) > 0.0 ? std::log((*f)(k)) + static_cast<double>(k) * log_scale : kNegInf;
      return out;
    }
  }
  Eigen::VectorXd rest(count - 1);
  for (Eigen::Index i = 0, j = 0; i < count; ++i)
    if (i != skip) rest(j++) = log_values(i);
  return log_elementary_symmetric(rest);
}

Eigen::VectorXd log_of(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i) > 0.0 ? std::log(v(i)) : kNegInf;
  return out;
}

}  // namespace

CardinalityPmf::CardinalityPmf(Eigen::VectorXd probs) : probs_(std::move(probs)) {
  if (probs_.size() < 1) throw ValidationError("cardinality pmf must have at least one entry");
  if (!probs_.allFinite() || (probs_.array() < 0.0).any())
    throw ValidationError("cardinality pmf entries must be finite and non-negative");
  if (std::abs(probs_.sum() - 1.0) > 1e-9) throw ValidationError("cardinality pmf must sum to 1");
}

CardinalityPmf CardinalityPmf::binomial(const BinomialCardinality& card) {
  Eigen::VectorXd p = binomial_pmf_vector(card);
  p /= p.sum();
  return CardinalityPmf(std::move(p));
}

CardinalityPmf CardinalityPmf::uniform(int n_max) {
  if (n_max < 0) throw ValidationError("uniform cardinality needs n_max >= 0");
  return CardinalityPmf(Eigen::VectorXd::Constant(n_max + 1, 1.0 / (n_max + 1)));
}

CardinalityPmf CardinalityPmf::resized(int n_max) const {
  if (n_max < 0) throw ValidationError("n_max must be non-negative");
  if (n_max >= this->n_max()) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n_max + 1);
    p.head(probs_.size()) = probs_;
    return CardinalityPmf(std::move(p));
  }
  if (probs_.tail(this->n_max() - n_max).sum() > 0.0)
    throw ValidationError("n_max " + std::to_string(n_max) + " truncates prior cardinality mass");
  return CardinalityPmf(probs_.head(n_max + 1));
}

double marginal_q(const GaussianComponent& component, const ObservationModel& obs, const Point2& y) {
  return isotropic_normal_pdf(y, component.mean, obs.sigma_yo + component.variance);
}

namespace {

// log alpha<c, q(y)> - log lambda_U(y), per point.
Eigen::VectorXd log_nu_values(const PersistenceDiagram& diagram, const GaussianMixtureIntensity& prior,
                              const ObservationModel& obs, const UnexpectedModel& unexpected) {
  validate_diagram(diagram);
  Eigen::VectorXd out(static_cast<Eigen::Index>(diagram.size()));
  const double log_alpha = obs.alpha > 0.0 ? std::log(obs.alpha) : kNegInf;
  std::vector<double> terms(prior.size());
  for (std::size_t i = 0; i < diagram.size(); ++i) {
    const Point2& y = diagram.points[i];
    for (std::size_t l = 0; l < prior.size(); ++l) {
      const auto& c = prior.components()[l];
      terms[l] = std::log(c.weight) + isotropic_normal_logpdf(y, c.mean, obs.sigma_yo + c.variance);
    }
    out(static_cast<Eigen::Index>(i)) = log_alpha + log_sum_exp(terms) - unexpected_log_intensity(unexpected, y);
  }
  return out;
}

}  // namespace

Eigen::VectorXd nu_values(const PersistenceDiagram& diagram, const GaussianMixtureIntensity& prior,
                          const ObservationModel& obs, const UnexpectedModel& unexpected) {
  return log_nu_values(diagram, prior, obs, unexpected).array().exp().matrix();
}

double log_gamma_term(int a, int b, int tau, int K, std::span<const double> log_e,
                      const BinomialCardinality& unexpected_card, double lam) {
  if (a < 0 || a > 1 || b < 0 || b > 1) throw ValidationError("gamma term indices must be 0 or 1");
  if (tau < 0 || K - a < 0) throw ValidationError("gamma term needs tau >= 0 and K >= a");
  if (static_cast<int>(log_e.size()) < K - a + 1)
    throw ValidationError("gamma term needs " + std::to_string(K - a + 1) + " elementary symmetric values");
  const double log_lam = lam > 0.0 ? std::log(lam) : kNegInf;
  std::vector<double> terms;
  for (int k = 0; k <= std::min(K - a, tau); ++k) {
    const int perm = k + b;
    if (perm > tau) continue;  // P(tau, perm) = 0
    const int unexpected_count = K - k - a;
    const double log_rho = binomial_logpmf(unexpected_card, unexpected_count);
    const double log_ek = log_e[static_cast<std::size_t>(k)];
    if (log_rho == kNegInf || log_ek == kNegInf) continue;
    const int power = tau - perm;
    if (power > 0 && log_lam == kNegInf) continue;  // 0^power with power > 0
    const double log_power = power == 0 ? 0.0 : power * log_lam;
    terms.push_back(std::lgamma(unexpected_count + 1.0) + std::lgamma(tau + 1.0) - std::lgamma(power + 1.0) +
                    log_rho + log_power + log_ek);
  }
  return log_sum_exp(terms);
}

double gamma_term(int a, int b, int tau, int K, const Eigen::VectorXd& e, const BinomialCardinality& unexpected_card,
                  double lam) {
  const Eigen::VectorXd log_e = log_of(e);
  return std::exp(log_gamma_term(a, b, tau, K, std::span<const double>(log_e.data(), log_e.size()),
                                 unexpected_card, lam));
}

PosteriorDistribution compute_posterior(const GaussianMixtureIntensity& prior_intensity,
                                        const CardinalityPmf& prior_cardinality, const ObservationModel& obs,
                                        const UnexpectedModel& unexpected,
                                        std::span<const PersistenceDiagram> observations, std::optional<int> n_max) {
  if (observations.empty()) throw ValidationError("posterior needs at least one observed diagram");
  if (prior_intensity.size() == 0) throw ValidationError("prior intensity has no components");
  const int truncation = n_max.value_or(prior_cardinality.n_max());
  const CardinalityPmf rho = prior_cardinality.resized(truncation);
  const Eigen::VectorXd log_rho = log_of(rho.probs());
  const double lam = vanished_mass(prior_intensity, obs);
  const double m = static_cast<double>(observations.size());
  const double log_alpha = obs.alpha > 0.0 ? std::log(obs.alpha) : kNegInf;

  PosteriorDistribution post;
  post.prior_intensity = prior_intensity;
  post.m = static_cast<int>(observations.size());
  Eigen::VectorXd card = Eigen::VectorXd::Zero(truncation + 1);

  for (std::size_t i = 0; i < observations.size(); ++i) {
    const PersistenceDiagram& diagram = observations[i];
    const int K = static_cast<int>(diagram.size());
    const Eigen::VectorXd log_nu = log_nu_values(diagram, prior_intensity, obs, unexpected);
    const std::vector<double> log_e = log_elementary_symmetric(log_nu);

    std::vector<double> log_g00(truncation + 1), log_g01(truncation + 1);
    for (int n = 0; n <= truncation; ++n) {
      log_g00[n] = log_gamma_term(0, 0, n, K, log_e, unexpected.cardinality, lam);
      log_g01[n] = log_gamma_term(0, 1, n, K, log_e, unexpected.cardinality, lam);
    }
    const double log_den = log_inner(log_rho, log_g00);
    if (!std::isfinite(log_den))
      throw NumericalError("observation " + std::to_string(i) + " has zero likelihood under the model");

    post.vanished_scale += (1.0 - obs.alpha) * std::exp(log_inner(log_rho, log_g01) - log_den) / m;
    for (int n = 0; n <= truncation; ++n) card(n) += std::exp(log_rho(n) + log_g00[n] - log_den) / m;

    if (K == 0) continue;
    const double log_scale = log_nu.maxCoeff();
    Eigen::VectorXd scaled_e;
    if (log_scale != kNegInf) scaled_e = elementary_symmetric((log_nu.array() - log_scale).exp().matrix());

    for (int j = 0; j < K; ++j) {
      const Point2& y = diagram.points[static_cast<std::size_t>(j)];
      const std::vector<double> log_e_rest = log_elementary_symmetric_without(log_nu, scaled_e, log_scale, j);
      std::vector<double> log_g11(truncation + 1);
      for (int n = 0; n <= truncation; ++n)
        log_g11[n] = log_gamma_term(1, 1, n, K, log_e_rest, unexpected.cardinality, lam);
      const double log_b = log_inner(log_rho, log_g11) - log_den;
      const double log_lu = unexpected_log_intensity(unexpected, y);
      for (const auto& c : prior_intensity.components()) {
        const auto product = gaussian_product(y, obs.sigma_yo, c.mean, c.variance);
        const double log_q = isotropic_normal_logpdf(y, c.mean, obs.sigma_yo + c.variance);
        const double weight = std::exp(log_b + log_alpha + std::log(c.weight) + log_q - log_lu) / m;
        post.observed_components.push_back({weight, product.mean, product.variance});
      }
    }
  }
  post.cardinality = CardinalityPmf(card);
  return post;
}

PosteriorDistribution compute_posterior(const IidClusterPrior& prior, const ObservationModel& obs,
                                        const UnexpectedModel& unexpected,
                                        std::span<const PersistenceDiagram> observations, std::optional<int> n_max) {
  return compute_posterior(prior.intensity, CardinalityPmf::binomial(prior.cardinality), obs, unexpected,
                           observations, n_max);
}

CardinalityStats cardinality_stats(const CardinalityPmf& pmf) {
  const Eigen::VectorXd& p = pmf.probs();
  const Eigen::VectorXd n = Eigen::VectorXd::LinSpaced(p.size(), 0.0, static_cast<double>(p.size() - 1));
  CardinalityStats stats;
  stats.mean = p.dot(n);
  stats.variance = p.dot((n.array() - stats.mean).square().matrix());
  Eigen::Index arg = 0;
  p.maxCoeff(&arg);  // first index on ties
  stats.map = static_cast<int>(arg);
  return stats;
}

CardinalityStats posterior_cardinality_stats(const PosteriorDistribution& post) {
  return cardinality_stats(post.cardinality);
}

double eval_posterior_intensity(const PosteriorDistribution& post, const Point2& x) {
  if (!in_wedge(x)) throw ValidationError("posterior intensity evaluated outside the wedge");
  double value = post.vanished_scale > 0.0 ? post.vanished_scale * post.prior_intensity(x) : 0.0;
  for (const auto& c : post.observed_components) value += c.weight * isotropic_normal_pdf(x, c.mean, c.variance);
  return value;
}

double log_posterior_intensity(const PosteriorDistribution& post, const Point2& x) {
  if (!in_wedge(x)) throw ValidationError("posterior intensity evaluated outside the wedge");
  std::vector<double> terms;
  terms.reserve(post.prior_intensity.size() + post.observed_components.size());
  if (post.vanished_scale > 0.0) {
    const double log_scale = std::log(post.vanished_scale);
    for (const auto& c : post.prior_intensity.components())
      terms.push_back(log_scale + std::log(c.weight) + isotropic_normal_logpdf(x, c.mean, c.variance));
  }
  for (const auto& c : post.observed_components)
    if (c.weight > 0.0) terms.push_back(std::log(c.weight) + isotropic_normal_logpdf(x, c.mean, c.variance));
  return log_sum_exp(terms);
}

double diagram_log_density(const PosteriorDistribution& post, const PersistenceDiagram& diagram) {
  validate_diagram(diagram);
  const int size = static_cast<int>(diagram.size());
  if (size > post.cardinality.n_max())
    throw ValidationError("diagram has " + std::to_string(size) + " points, above the cardinality truncation " +
                          std::to_string(post.cardinality.n_max()));
  const double p = post.cardinality(size);
  if (!(p > 0.0)) return kNegInf;
  double total = std::log(p);
  for (const auto& d : diagram.points) {
    const double log_lambda = log_posterior_intensity(post, d);
    if (log_lambda == kNegInf) return kNegInf;
    total += log_lambda;
  }
  return total;
}

Eigen::MatrixXd intensity_grid(const PosteriorDistribution& post, double b_max, double p_max, int nb, int np,
                               bool normalize) {
  if (nb < 2 || np < 2) throw ValidationError("intensity grid needs at least 2 nodes per axis");
  if (!(b_max > 0.0) || !(p_max > 0.0)) throw ValidationError("intensity grid extent must be positive");
  Eigen::MatrixXd grid(static_cast<Eigen::Index>(nb) * np, 3);
  Eigen::Index row = 0;
  for (int i = 0; i < nb; ++i) {
    const double b = b_max * i / (nb - 1);
    for (int j = 0; j < np; ++j) {
      const double p = p_max * j / (np - 1);
      grid.row(row++) << b, p, eval_posterior_intensity(post, Point2(b, p));
    }
  }
  if (normalize) {
    const double top = grid.col(2).maxCoeff();
    if (top > 0.0) grid.col(2) /= top;
  }
  return grid;
}

std::vector<Point2> grid_local_maxima(const Eigen::MatrixXd& grid, int nb, int np) {
  auto at = [&](int i, int j) { return grid(static_cast<Eigen::Index>(i) * np + j, 2); };
  std::vector<Point2> maxima;
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < np; ++j) {
      const double v = at(i, j);
      if (!(v > 0.0)) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nb || jj >= np) continue;
          if (at(ii, jj) >= v) {
            is_max = false;
            break;
          }
        }
      if (is_max) {
        const Eigen::Index r = static_cast<Eigen::Index>(i) * np + j;
        maxima.emplace_back(grid(r, 0), grid(r, 1));
      }
    }
  }
  return maxima;
}

}  // namespace pdbayes

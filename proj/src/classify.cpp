#include "pdbayes/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "pdbayes/errors.hpp"

namespace pdbayes {

TrainedClassifier fit(const std::map<std::string, std::vector<PersistenceDiagram>>& training,
                      const ModelConfig& config, double threshold) {
  if (training.size() < 2) throw ValidationError("classifier needs at least two classes");
  if (!(threshold > 0.0)) throw ValidationError("Bayes factor threshold must be positive");
  TrainedClassifier clf;
  clf.threshold = threshold;
  clf.config = config;
  for (const auto& [label, diagrams] : training) {
    if (diagrams.empty()) throw ValidationError("class '" + label + "' has no training diagrams");
    try {
      clf.posteriors.push_back(
          compute_posterior(config.intensity, config.cardinality, config.obs, config.unexpected, diagrams, config.n_max));
    } catch (const NumericalError& err) {
      throw NumericalError("class '" + label + "': " + err.what());
    }
    clf.classes.push_back(label);
  }
  return clf;
}

std::vector<double> class_log_densities(const TrainedClassifier& clf, const PersistenceDiagram& diagram) {
  std::vector<double> out;
  out.reserve(clf.posteriors.size());
  for (const auto& post : clf.posteriors) out.push_back(diagram_log_density(post, diagram));
  return out;
}

namespace {

double log_ratio(double log_i, double log_j) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (log_i == -inf && log_j == -inf)
    throw NumericalError("Bayes factor undefined: diagram has zero density under both classes");
  return log_i - log_j;
}

}  // namespace

double log_bayes_factor(const TrainedClassifier& clf, const PersistenceDiagram& diagram, std::size_t i,
                        std::size_t j) {
  if (i == j || i >= clf.posteriors.size() || j >= clf.posteriors.size())
    throw ValidationError("Bayes factor needs two distinct valid classes");
  return log_ratio(diagram_log_density(clf.posteriors[i], diagram), diagram_log_density(clf.posteriors[j], diagram));
}

double bayes_factor(const TrainedClassifier& clf, const PersistenceDiagram& diagram, std::size_t i, std::size_t j) {
  return std::exp(log_bayes_factor(clf, diagram, i, j));
}

Prediction vote(std::span<const double> log_densities, double threshold) {
  const std::size_t classes = log_densities.size();
  const double log_c = std::log(threshold);
  Prediction p;
  p.votes.assign(classes, 0);
  for (std::size_t i = 0; i < classes; ++i)
    for (std::size_t j = i + 1; j < classes; ++j) {
      if (log_ratio(log_densities[i], log_densities[j]) > log_c)
        ++p.votes[i];
      else
        ++p.votes[j];
    }
  p.label = static_cast<std::size_t>(std::max_element(p.votes.begin(), p.votes.end()) - p.votes.begin());
  return p;
}

Prediction predict(const TrainedClassifier& clf, const PersistenceDiagram& diagram) {
  const std::vector<double> dens = class_log_densities(clf, diagram);
  return vote(dens, clf.threshold);
}

EvalReport cross_validate(std::span<const LabeledDiagram> data, int k, const ModelConfig& config, double threshold,
                          std::uint64_t seed) {
  if (k < 2) throw ValidationError("cross validation needs at least 2 folds");
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data[i].label].push_back(i);
  if (by_class.size() < 2) throw ValidationError("cross validation needs at least two classes");

  EvalReport report;
  report.folds = k;
  std::vector<int> fold_of(data.size(), 0);
  std::vector<std::size_t> class_of(data.size(), 0);
  std::mt19937_64 rng(seed);
  for (auto& [label, members] : by_class) {
    if (static_cast<int>(members.size()) < k)
      throw ValidationError("class '" + label + "' has " + std::to_string(members.size()) + " instances, fewer than " +
                            std::to_string(k) + " folds");
    for (std::size_t i = members.size(); i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(members[i - 1], members[pick(rng)]);
    }
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
      fold_of[members[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
      class_of[members[pos]] = report.classes.size();
    }
    report.classes.push_back(label);
  }

  const std::size_t classes = report.classes.size();
  report.confusion = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(classes));
  for (int fold = 0; fold < k; ++fold) {
    std::map<std::string, std::vector<PersistenceDiagram>> training;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (fold_of[i] != fold) training[data[i].label].push_back(data[i].diagram);
    const TrainedClassifier clf = fit(training, config, threshold);
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] != fold) continue;
      const Prediction p = predict(clf, data[i].diagram);
      report.predictions.push_back({i, fold, class_of[i], p.label, p.votes});
      ++report.confusion(static_cast<Eigen::Index>(class_of[i]), static_cast<Eigen::Index>(p.label));
    }
  }
  std::sort(report.predictions.begin(), report.predictions.end(),
            [](const FoldPrediction& a, const FoldPrediction& b) { return a.instance < b.instance; });

  Eigen::MatrixXd scores(static_cast<Eigen::Index>(report.predictions.size()), static_cast<Eigen::Index>(classes));
  std::vector<std::size_t> labels;
  for (std::size_t r = 0; r < report.predictions.size(); ++r) {
    const auto& p = report.predictions[r];
    for (std::size_t c = 0; c < classes; ++c)
      scores(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          static_cast<double>(p.votes[c]) / static_cast<double>(classes - 1);
    labels.push_back(p.truth);
  }
  report.auc = roc_auc(scores, labels);
  return report;
}

double binary_auc(std::span<const double> scores, std::span<const int> positive) {
  if (scores.size() != positive.size()) throw ValidationError("scores and labels differ in length");
  const std::size_t n = scores.size();
  for (double s : scores)
    if (!std::isfinite(s)) throw ValidationError("AUC scores must be finite");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Ranks are doubled so midranks of tie groups stay integral.
  long long pos_rank_sum2 = 0;
  std::size_t n_pos = 0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    while (end < n && scores[order[end]] == scores[order[start]]) ++end;
    const long long mid2 = static_cast<long long>(start + 1 + end);  // 2 * (first + last) / 2
    for (std::size_t t = start; t < end; ++t)
      if (positive[order[t]] != 0) {
        pos_rank_sum2 += mid2;
        ++n_pos;
      }
    start = end;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw ValidationError("AUC needs both positive and negative instances");
  const long long pp = static_cast<long long>(n_pos);
  const long long u2 = pos_rank_sum2 - pp * (pp + 1);  // 2 * Mann-Whitney U
  return static_cast<double>(u2) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double roc_auc(const Eigen::MatrixXd& scores, std::span<const std::size_t> labels) {
  const auto classes = static_cast<std::size_t>(scores.cols());
  if (classes < 2) throw ValidationError("AUC needs at least two classes");
  if (static_cast<std::size_t>(scores.rows()) != labels.size())
    throw ValidationError("scores and labels differ in length");
  double total = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<int> positive(labels.size());
    std::vector<double> column(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      positive[i] = labels[i] == c ? 1 : 0;
      column[i] = scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    }
    if (std::find(positive.begin(), positive.end(), 1) == positive.end())
      throw ValidationError("class " + std::to_string(c) + " is absent from the labels");
    total += binary_auc(column, positive);
  }
  return total / static_cast<double>(classes);
}

}  // namespace pdbayes

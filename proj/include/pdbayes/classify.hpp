#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pdbayes/persistence.hpp"
#include "pdbayes/pointprocess.hpp"
#include "pdbayes/posterior.hpp"

namespace pdbayes {

/// Model blocks shared by every class posterior.
struct ModelConfig {
  GaussianMixtureIntensity intensity;
  CardinalityPmf cardinality;
  ObservationModel obs;
  UnexpectedModel unexpected;
  std::optional<int> n_max;
};

struct LabeledDiagram {
  std::string label;
  PersistenceDiagram diagram;
};

/// One posterior per class; classes are held in sorted label order, which is
/// also the tie-breaking order of the vote.
struct TrainedClassifier {
  std::vector<std::string> classes;
  std::vector<PosteriorDistribution> posteriors;
  double threshold = 1.0;
  ModelConfig config;
};

struct Prediction {
  std::size_t label = 0;  // index into classes
  std::vector<int> votes;
};

struct FoldPrediction {
  std::size_t instance = 0;  // index into the input dataset
  int fold = 0;
  std::size_t truth = 0;
  std::size_t predicted = 0;
  std::vector<int> votes;
};

struct EvalReport {
  std::vector<std::string> classes;
  std::vector<FoldPrediction> predictions;
  Eigen::MatrixXi confusion;  // rows: truth, cols: predicted
  double auc = 0.0;
  int folds = 0;
};

TrainedClassifier fit(const std::map<std::string, std::vector<PersistenceDiagram>>& training,
                      const ModelConfig& config, double threshold = 1.0);

/// Per-class log densities log p(D | Q_k) in class order.
std::vector<double> class_log_densities(const TrainedClassifier& clf, const PersistenceDiagram& diagram);

/// log BF^{ij} = log p(D|Q_i) - log p(D|Q_j). Throws NumericalError when both
/// densities are zero.
double log_bayes_factor(const TrainedClassifier& clf, const PersistenceDiagram& diagram, std::size_t i,
                        std::size_t j);
double bayes_factor(const TrainedClassifier& clf, const PersistenceDiagram& diagram, std::size_t i,
                    std::size_t j);

/// Pairwise voting from precomputed class log densities: for i < j, one vote
/// to i if BF^{ij} > threshold, otherwise to j. Ties go to the smaller index.
Prediction vote(std::span<const double> log_densities, double threshold);

Prediction predict(const TrainedClassifier& clf, const PersistenceDiagram& diagram);

/// Stratified k-fold cross validation with seeded shuffling. AUC is the macro
/// one-vs-rest AUC of pooled held-out vote fractions.
EvalReport cross_validate(std::span<const LabeledDiagram> data, int k, const ModelConfig& config,
                          double threshold, std::uint64_t seed);

/// AUC of `scores` against 0/1 labels (nonzero = positive) via the
/// Mann-Whitney statistic with midranks for ties.
double binary_auc(std::span<const double> scores, std::span<const int> positive);

/// Macro one-vs-rest AUC. `scores` is instances x classes; labels index columns.
double roc_auc(const Eigen::MatrixXd& scores, std::span<const std::size_t> labels);

}  // namespace pdbayes

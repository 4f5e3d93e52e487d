#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pdbayes/classify.hpp"
#include "pdbayes/io.hpp"
#include "pdbayes/persistence.hpp"
#include "pdbayes/posterior.hpp"

namespace pdbayes::cli {

namespace fs = std::filesystem;

struct PdOptions {
  fs::path input;
  fs::path out;
  int dim = 1;
  std::optional<double> max_radius;
  std::optional<int> subsample;
  SubsampleStrategy strategy = SubsampleStrategy::TopPersistence;
  std::uint64_t seed = 0;
};

struct PosteriorOptions {
  fs::path config;
  std::vector<fs::path> diagrams;
  fs::path out;
  std::optional<io::GridSpec> grid;
  std::optional<fs::path> grid_out;
};

struct ClassifyOptions {
  fs::path config;
  fs::path data;
  fs::path out;
  std::optional<int> folds;
  std::optional<double> c;
  std::optional<std::uint64_t> seed;
};

enum class PriorChoice { Informative, Uninformative };
enum class CardinalityChoice { Informative, Uniform };

/// Model and data settings for one panel of the polar-curve study.
struct SensitivitySetup {
  int case_id = 1;
  char row = 'e';  // parameter row: 'e' (default), 'k' or 'l'
  double noise_var = 0.001;
  int n_points = 120;
  std::uint64_t seed = 0;
  GaussianMixtureIntensity intensity;
  CardinalityPmf cardinality;
  ObservationModel obs;
  UnexpectedModel unexpected;
  int n_max = 15;
};

struct SensitivityResult {
  PointCloud cloud;
  PersistenceDiagram diagram;
  PosteriorDistribution posterior;
  CardinalityStats stats;
  Eigen::MatrixXd grid;
  io::GridSpec grid_spec;
};

struct SensitivityOptions {
  int case_id = 1;
  PriorChoice prior = PriorChoice::Informative;
  CardinalityChoice cardinality = CardinalityChoice::Informative;
  char row = 'e';
  std::optional<std::uint64_t> seed;
  fs::path out;
};

struct SynthOptions {
  std::string kind;  // "polar" or "network"
  std::optional<std::string> params;  // inline JSON object or path to one
  std::optional<int> n;
  std::optional<double> noise_var;
  std::optional<int> class_id;
  std::uint64_t seed = 0;
  fs::path out;
};

/// Default data seed of the polar-curve study.
inline constexpr std::uint64_t kSensitivitySeed = 1;

GaussianMixtureIntensity informative_intensity();
GaussianMixtureIntensity uninformative_intensity();

/// Throws ValidationError for an unknown case or row.
SensitivitySetup sensitivity_setup(int case_id, PriorChoice prior, CardinalityChoice cardinality, char row = 'e');

SensitivityResult run_sensitivity_model(const SensitivitySetup& setup, const io::GridSpec& grid = {});

PersistenceDiagram compute_diagram(const PointCloud& cloud, int dim, std::optional<double> max_radius);

void run_pd(const PdOptions& opts);
void run_posterior(const PosteriorOptions& opts);
EvalReport run_classify(const ClassifyOptions& opts);
void run_sensitivity(const SensitivityOptions& opts);
PointCloud synthesize(const SynthOptions& opts);
void run_synth(const SynthOptions& opts);

/// Full command line entry point; returns the process exit code
/// (0 ok, 1 validation, 2 numerical, 3 I/O).
int main_entry(int argc, const char* const* argv);

}  // namespace pdbayes::cli

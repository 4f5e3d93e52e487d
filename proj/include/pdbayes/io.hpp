#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pdbayes/classify.hpp"
#include "pdbayes/persistence.hpp"
#include "pdbayes/pointprocess.hpp"
#include "pdbayes/posterior.hpp"

namespace pdbayes::io {

using json = nlohmann::json;

struct GridSpec {
  double b_max = 1.0;
  double p_max = 1.0;
  int nb = 100;
  int np = 100;
};

struct ClassifierSpec {
  double c = 1.0;
  int k = 10;
  std::uint64_t seed = 0;
};

/// Validated run configuration. `binomial` is set when the prior cardinality
/// was given as (N0, rho_x) rather than as an explicit pmf.
struct RunConfig {
  GaussianMixtureIntensity intensity;
  CardinalityPmf prior_cardinality;
  std::optional<BinomialCardinality> binomial;
  ObservationModel obs;
  UnexpectedModel unexpected;
  std::optional<int> n_max;
  GridSpec grid;
  ClassifierSpec classifier;

  ModelConfig model() const { return {intensity, prior_cardinality, obs, unexpected, n_max}; }
};

// Point clouds: CSV, one point per line. A single non-numeric first line is a
// header when data rows follow it.
PointCloud parse_point_cloud(const std::string& text);
PointCloud read_point_cloud(const std::filesystem::path& path);
std::string format_point_cloud(const PointCloud& cloud);
void write_point_cloud(const std::filesystem::path& path, const PointCloud& cloud);

// Diagrams: {"dim": int, "points": [[b, p], ...]}.
json diagram_to_json(const PersistenceDiagram& pd);
PersistenceDiagram diagram_from_json(const json& j);
PersistenceDiagram read_diagram(const std::filesystem::path& path);
void write_diagram(const std::filesystem::path& path, const PersistenceDiagram& pd);

// Model configuration; unknown keys are rejected.
RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& config);
RunConfig read_config(const std::filesystem::path& path);

// Posterior: {"cardinality", "vanished_scale", "components", "m", "prior_components"}.
json posterior_to_json(const PosteriorDistribution& post);
PosteriorDistribution posterior_from_json(const json& j);
void write_posterior(const std::filesystem::path& path, const PosteriorDistribution& post);

/// CSV "birth,persistence,intensity" rows of an intensity_grid matrix.
std::string format_intensity_grid(const Eigen::MatrixXd& grid);
void write_intensity_grid(const std::filesystem::path& path, const Eigen::MatrixXd& grid);

/// CSV "n,probability" rows.
std::string format_cardinality(const CardinalityPmf& pmf);
void write_cardinality(const std::filesystem::path& path, const CardinalityPmf& pmf);

/// Manifest: JSON list of {"label": str, "diagram": path-or-inline}; relative
/// paths resolve against the manifest's directory.
std::vector<LabeledDiagram> read_manifest(const std::filesystem::path& path);

json report_to_json(const EvalReport& report);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& contents);

/// Writes several files into `dir` (created if missing). Every file is staged
/// first; nothing is renamed into place unless all stages succeed.
void write_files_atomic(const std::filesystem::path& dir,
                        const std::vector<std::pair<std::string, std::string>>& files);
std::string read_text(const std::filesystem::path& path);

}  // namespace pdbayes::io

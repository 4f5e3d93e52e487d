#include "commands.hpp"

#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "pdbayes/errors.hpp"
#include "pdbayes/synthetic.hpp"

namespace pdbayes::cli {

namespace {

constexpr int kSensitivityCardinality = 15;

double case_noise_variance(int case_id) {
  switch (case_id) {
    case 1: return 0.001;
    case 2: return 0.005;
    case 3: return 0.01;
    default: throw ValidationError("unknown case " + std::to_string(case_id) + " (expected 1, 2 or 3)");
  }
}

// (sigma_yo, mu_yu, rho_y) for a case and parameter row.
std::tuple<double, double, double> case_parameters(int case_id, char row) {
  if (row == 'e') return {0.01, 20.0, 0.5};
  if (case_id == 2 && row == 'k') return {0.001, 25.0, 0.5};
  if (case_id == 2 && row == 'l') return {0.001, 16.0, 0.5};
  if (case_id == 3 && (row == 'k' || row == 'l')) return {0.001, 20.0, 0.6};
  throw ValidationError(std::string("case ") + std::to_string(case_id) + " has no parameter row '" + row + "'");
}

io::json stats_to_json(const CardinalityStats& s) {
  return {{"mean", s.mean}, {"variance", s.variance}, {"map", s.map}};
}

io::json parse_params(const std::string& text) {
  const bool inline_json = text.find('{') != std::string::npos;
  if (!inline_json) return io::read_json(text);
  try {
    return io::json::parse(text);
  } catch (const io::json::parse_error& err) {
    throw ValidationError(std::string("--params: invalid JSON: ") + err.what());
  }
}

double json_number(const io::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ValidationError(std::string("--params.") + key + ": expected a number");
  return j.at(key).get<double>();
}

int json_integer(const io::json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ValidationError(std::string("--params.") + key + ": expected an integer");
  return j.at(key).get<int>();
}

void reject_unknown(const io::json& j, std::initializer_list<const char*> keys) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ValidationError("--params: unknown key '" + key + "'");
  }
}

}  // namespace

GaussianMixtureIntensity informative_intensity() {
  return GaussianMixtureIntensity({{2.0, Point2(0.2, 0.55), 0.0018}, {2.0, Point2(0.17, 0.35), 0.0018}});
}

GaussianMixtureIntensity uninformative_intensity() {
  return GaussianMixtureIntensity({{1.0, Point2(0.5, 0.5), 0.5}});
}

SensitivitySetup sensitivity_setup(int case_id, PriorChoice prior, CardinalityChoice cardinality, char row) {
  SensitivitySetup s;
  s.case_id = case_id;
  s.row = row;
  s.noise_var = case_noise_variance(case_id);
  s.seed = kSensitivitySeed;
  const auto [sigma_yo, mu_yu, rho_y] = case_parameters(case_id, row);
  s.intensity = prior == PriorChoice::Informative ? informative_intensity() : uninformative_intensity();
  // The informative cardinality puts its mode at the four loops of the curve.
  s.cardinality = cardinality == CardinalityChoice::Informative
                      ? CardinalityPmf::binomial(BinomialCardinality(kSensitivityCardinality, 4.0 / 15.0))
                      : CardinalityPmf::uniform(kSensitivityCardinality);
  s.obs = ObservationModel(0.99, sigma_yo);
  s.unexpected = UnexpectedModel(mu_yu, BinomialCardinality(kSensitivityCardinality, rho_y));
  s.n_max = kSensitivityCardinality;
  return s;
}

PersistenceDiagram compute_diagram(const PointCloud& cloud, int dim, std::optional<double> max_radius) {
  const auto diagrams = vr_persistence(cloud, dim, max_radius);
  return tilt(diagrams.at(static_cast<std::size_t>(dim)));
}

SensitivityResult run_sensitivity_model(const SensitivitySetup& setup, const io::GridSpec& grid) {
  SensitivityResult r;
  r.cloud = polar_curve_sample(setup.n_points, setup.noise_var, setup.seed);
  r.diagram = compute_diagram(r.cloud, 1, std::nullopt);
  const std::vector<PersistenceDiagram> obs{r.diagram};
  r.posterior = compute_posterior(setup.intensity, setup.cardinality, setup.obs, setup.unexpected, obs, setup.n_max);
  r.stats = posterior_cardinality_stats(r.posterior);
  r.grid_spec = grid;
  r.grid = intensity_grid(r.posterior, grid.b_max, grid.p_max, grid.nb, grid.np);
  return r;
}

void run_pd(const PdOptions& opts) {
  if (opts.dim != 0 && opts.dim != 1) throw ValidationError("--dim must be 0 or 1");
  if (opts.max_radius && !(*opts.max_radius > 0.0)) throw ValidationError("--max-radius must be positive");
  if (opts.subsample && *opts.subsample < 1) throw ValidationError("--subsample must be at least 1");
  const PointCloud cloud = io::read_point_cloud(opts.input);
  PersistenceDiagram pd = compute_diagram(cloud, opts.dim, opts.max_radius);
  if (opts.subsample) pd = subsample_diagram(pd, *opts.subsample, opts.strategy, opts.seed);
  io::write_diagram(opts.out, pd);
}

void run_posterior(const PosteriorOptions& opts) {
  if (opts.diagrams.empty()) throw ValidationError("--diagrams needs at least one file");
  if (opts.grid_out && !opts.grid) throw ValidationError("--grid-out requires --grid");
  const io::RunConfig config = io::read_config(opts.config);
  io::GridSpec grid = opts.grid.value_or(config.grid);
  if (!(grid.b_max > 0.0) || !(grid.p_max > 0.0) || grid.nb < 2 || grid.np < 2)
    throw ValidationError("--grid needs positive extents and at least 2 nodes per axis");

  std::vector<PersistenceDiagram> diagrams;
  for (const auto& path : opts.diagrams) diagrams.push_back(io::read_diagram(path));

  const PosteriorDistribution post =
      compute_posterior(config.intensity, config.prior_cardinality, config.obs, config.unexpected, diagrams, config.n_max);

  if (!opts.grid_out) {
    io::write_posterior(opts.out, post);
    return;
  }
  const Eigen::MatrixXd values = intensity_grid(post, grid.b_max, grid.p_max, grid.nb, grid.np);
  // Stage both outputs before either is moved into place.
  const fs::path post_tmp = fs::path(opts.out).concat(".part");
  io::write_posterior(post_tmp, post);
  try {
    io::write_intensity_grid(*opts.grid_out, values);
  } catch (...) {
    std::error_code ec;
    fs::remove(post_tmp, ec);
    throw;
  }
  std::error_code ec;
  fs::rename(post_tmp, opts.out, ec);
  if (ec) {
    fs::remove(post_tmp, ec);
    fs::remove(*opts.grid_out, ec);
    throw IoError("cannot move output into place at '" + opts.out.string() + "'");
  }
}

EvalReport run_classify(const ClassifyOptions& opts) {
  const io::RunConfig config = io::read_config(opts.config);
  const int folds = opts.folds.value_or(config.classifier.k);
  const double c = opts.c.value_or(config.classifier.c);
  const std::uint64_t seed = opts.seed.value_or(config.classifier.seed);
  if (folds < 2) throw ValidationError("--folds must be at least 2");
  if (!(c > 0.0)) throw ValidationError("--c must be positive");
  const auto data = io::read_manifest(opts.data);
  EvalReport report = cross_validate(data, folds, config.model(), c, seed);
  io::write_json(opts.out, io::report_to_json(report));
  return report;
}

void run_sensitivity(const SensitivityOptions& opts) {
  SensitivitySetup setup = sensitivity_setup(opts.case_id, opts.prior, opts.cardinality, opts.row);
  if (opts.seed) setup.seed = *opts.seed;
  const SensitivityResult r = run_sensitivity_model(setup);

  io::json summary = {
      {"case", setup.case_id},
      {"row", std::string(1, setup.row)},
      {"prior", opts.prior == PriorChoice::Informative ? "informative" : "uninformative"},
      {"cardinality", opts.cardinality == CardinalityChoice::Informative ? "informative" : "uniform"},
      {"seed", setup.seed},
      {"noise_var", setup.noise_var},
      {"n_points", setup.n_points},
      {"alpha", setup.obs.alpha},
      {"sigma_yo", setup.obs.sigma_yo},
      {"mu_yu", setup.unexpected.mu_yu},
      {"rho_y", setup.unexpected.cardinality.p},
      {"N_max", setup.n_max},
      {"observed_features", r.diagram.size()},
      {"posterior_cardinality", stats_to_json(r.stats)},
      {"prior_cardinality", stats_to_json(cardinality_stats(setup.cardinality))}};
  io::json maxima = io::json::array();
  for (const auto& p : grid_local_maxima(r.grid, r.grid_spec.nb, r.grid_spec.np)) maxima.push_back({p.x(), p.y()});
  summary["intensity_maxima"] = maxima;

  io::write_files_atomic(opts.out, {{"cloud.csv", io::format_point_cloud(r.cloud)},
                                    {"diagram.json", io::diagram_to_json(r.diagram).dump(2) + "\n"},
                                    {"posterior.json", io::posterior_to_json(r.posterior).dump(2) + "\n"},
                                    {"intensity.csv", io::format_intensity_grid(r.grid)},
                                    {"cardinality.csv", io::format_cardinality(r.posterior.cardinality)},
                                    {"summary.json", summary.dump(2) + "\n"}});
}

PointCloud synthesize(const SynthOptions& opts) {
  const io::json params = opts.params ? parse_params(*opts.params) : io::json::object();
  if (!params.is_object()) throw ValidationError("--params must be a JSON object");

  if (opts.kind == "polar") {
    reject_unknown(params, {"n", "noise_var", "offset", "scale"});
    PolarCurve curve;
    curve.offset = json_number(params, "offset", curve.offset);
    curve.scale = json_number(params, "scale", curve.scale);
    const int n = opts.n.value_or(json_integer(params, "n", 300));
    const double var = opts.noise_var.value_or(json_number(params, "noise_var", 0.001));
    return polar_curve_sample(n, var, opts.seed, curve);
  }
  if (opts.kind == "network") {
    reject_unknown(params, {"class", "lines", "spacing", "strands", "strand_gap", "noise_sigma", "box"});
    const int class_id = opts.class_id.value_or(json_integer(params, "class", 1));
    LoopNetworkParams p = loop_network_class(class_id);
    p.lines = json_integer(params, "lines", p.lines);
    p.spacing = json_number(params, "spacing", p.spacing);
    p.strands = json_integer(params, "strands", p.strands);
    p.strand_gap = json_number(params, "strand_gap", p.strand_gap);
    p.noise_sigma = json_number(params, "noise_sigma", p.noise_sigma);
    p.box = json_number(params, "box", p.box);
    return loop_network_generate(p, opts.seed);
  }
  throw ValidationError("--kind must be 'polar' or 'network'");
}

void run_synth(const SynthOptions& opts) { io::write_point_cloud(opts.out, synthesize(opts)); }

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"Persistence diagrams, Bayesian posterior inference and Bayes-factor classification"};
  app.require_subcommand(1);

  PdOptions pd;
  std::string strategy = "top_persistence";
  auto* pd_cmd = app.add_subcommand("pd", "Compute a tilted persistence diagram from a point cloud");
  pd_cmd->add_option("--input", pd.input, "Point cloud CSV")->required();
  pd_cmd->add_option("--dim", pd.dim, "Homology dimension (0 or 1)")->capture_default_str();
  pd_cmd->add_option("--max-radius", pd.max_radius, "Filtration cutoff (default: diameter of the cloud)");
  pd_cmd->add_option("--out", pd.out, "Output diagram JSON")->required();
  pd_cmd->add_option("--subsample", pd.subsample, "Keep at most k points");
  pd_cmd->add_option("--strategy", strategy, "top_persistence or uniform_random")
      ->check(CLI::IsMember({"top_persistence", "uniform_random"}))
      ->capture_default_str();
  pd_cmd->add_option("--seed", pd.seed, "Seed for uniform_random")->capture_default_str();

  PosteriorOptions post;
  std::vector<double> grid_args;
  auto* post_cmd = app.add_subcommand("posterior", "Posterior intensity and cardinality given observed diagrams");
  post_cmd->add_option("--config", post.config, "Model configuration JSON")->required();
  post_cmd->add_option("--diagrams", post.diagrams, "Observed diagram JSON files")->required();
  post_cmd->add_option("--out", post.out, "Output posterior JSON")->required();
  post_cmd->add_option("--grid", grid_args, "Intensity grid: B_MAX P_MAX NB NP")->expected(4);
  post_cmd->add_option("--grid-out", post.grid_out, "Output grid CSV");

  ClassifyOptions cls;
  auto* cls_cmd = app.add_subcommand("classify", "Cross-validated Bayes-factor classification");
  cls_cmd->add_option("--config", cls.config, "Model configuration JSON")->required();
  cls_cmd->add_option("--data", cls.data, "Manifest JSON of labelled diagrams")->required();
  cls_cmd->add_option("--folds", cls.folds, "Number of folds (default: config)");
  cls_cmd->add_option("--c", cls.c, "Bayes factor threshold (default: config)");
  cls_cmd->add_option("--seed", cls.seed, "Fold assignment seed (default: config)");
  cls_cmd->add_option("--out", cls.out, "Output report JSON")->required();

  SensitivityOptions sens;
  std::string prior_name = "informative", card_name = "informative", row = "e";
  auto* sens_cmd = app.add_subcommand("sensitivity", "Polar-curve prior sensitivity study");
  sens_cmd->add_option("--case", sens.case_id, "Noise case 1, 2 or 3")->required();
  sens_cmd->add_option("--prior", prior_name, "informative or uninformative")
      ->check(CLI::IsMember({"informative", "uninformative"}))
      ->capture_default_str();
  sens_cmd->add_option("--cardinality", card_name, "informative or uniform")
      ->check(CLI::IsMember({"informative", "uniform"}))
      ->capture_default_str();
  sens_cmd->add_option("--row", row, "Parameter row: e, k or l")
      ->check(CLI::IsMember({"e", "k", "l"}))
      ->capture_default_str();
  sens_cmd->add_option("--seed", sens.seed, "Point cloud seed");
  sens_cmd->add_option("--out", sens.out, "Output directory")->required();

  SynthOptions syn;
  auto* syn_cmd = app.add_subcommand("synth", "Write a seeded synthetic point cloud");
  syn_cmd->add_option("--kind", syn.kind, "polar or network")->required()->check(CLI::IsMember({"polar", "network"}));
  syn_cmd->add_option("--params", syn.params, "Generator parameters: inline JSON object or a JSON file");
  syn_cmd->add_option("--n", syn.n, "Number of points (polar)");
  syn_cmd->add_option("--noise-var", syn.noise_var, "Noise variance per coordinate (polar)");
  syn_cmd->add_option("--class", syn.class_id, "Network class 1, 2 or 3");
  syn_cmd->add_option("--seed", syn.seed, "Random seed")->capture_default_str();
  syn_cmd->add_option("--out", syn.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*pd_cmd) {
      pd.strategy = strategy == "top_persistence" ? SubsampleStrategy::TopPersistence : SubsampleStrategy::UniformRandom;
      run_pd(pd);
    } else if (*post_cmd) {
      if (!grid_args.empty()) {
        for (int i : {2, 3})
          if (grid_args[i] != static_cast<int>(grid_args[i])) throw ValidationError("--grid NB and NP must be integers");
        post.grid = io::GridSpec{grid_args[0], grid_args[1], static_cast<int>(grid_args[2]),
                                 static_cast<int>(grid_args[3])};
      }
      run_posterior(post);
    } else if (*cls_cmd) {
      const EvalReport report = run_classify(cls);
      std::cout << "AUC " << report.auc << "\n";
    } else if (*sens_cmd) {
      sens.prior = prior_name == "informative" ? PriorChoice::Informative : PriorChoice::Uninformative;
      sens.cardinality = card_name == "informative" ? CardinalityChoice::Informative : CardinalityChoice::Uniform;
      sens.row = row.front();
      run_sensitivity(sens);
    } else if (*syn_cmd) {
      run_synth(syn);
    }
  } catch (const ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const NumericalError& err) {
    std::cerr << "numerical error: " << err.what() << "\n";
    return 2;
  } catch (const IoError& err) {
    std::cerr << "i/o error: " << err.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace pdbayes::cli

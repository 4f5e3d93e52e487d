#include "pdbayes/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "pdbayes/errors.hpp"

namespace pdbayes::io {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_double(const std::string& field) {
  const std::string t = trim(field);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

// Key-checked accessors for config parsing.
class Object {
 public:
  Object(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_ + ": expected a JSON object");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : j_.items())
      if (!allowed.contains(key)) throw ValidationError(path_ + ": unknown key '" + key + "'");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& at(const char* key) const {
    if (!j_.contains(key)) throw ValidationError(path_ + ": missing key '" + key + "'");
    return j_.at(key);
  }

  double number(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ValidationError(name(key) + ": expected a number");
    return v.get<double>();
  }

  int integer(const char* key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ValidationError(name(key) + ": expected an integer");
    return v.get<int>();
  }

  std::string name(const char* key) const { return path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
};

template <class Build>
auto named(const std::string& where, Build&& build) {
  try {
    return build();
  } catch (const ValidationError& err) {
    throw ValidationError(where + ": " + err.what());
  }
}

Point2 point_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError(where + ": expected [b, p]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json components_to_json(const std::vector<GaussianComponent>& comps, const char* weight_key) {
  json arr = json::array();
  for (const auto& c : comps)
    arr.push_back({{weight_key, c.weight}, {"mu", {c.mean.x(), c.mean.y()}}, {"sigma", c.variance}});
  return arr;
}

std::vector<GaussianComponent> components_from_json(const json& arr, const char* weight_key, const std::string& where,
                                                    bool positive_weights) {
  if (!arr.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<GaussianComponent> comps;
  for (std::size_t l = 0; l < arr.size(); ++l) {
    const std::string path = where + "[" + std::to_string(l) + "]";
    Object o(arr[l], path);
    o.allow_only({weight_key, "mu", "sigma"});
    GaussianComponent c{o.number(weight_key), point_from_json(o.at("mu"), o.name("mu")), o.number("sigma")};
    if (positive_weights ? !(c.weight > 0.0) : !(c.weight >= 0.0))
      throw ValidationError(o.name(weight_key) + ": out of range");
    if (!(c.variance > 0.0)) throw ValidationError(o.name("sigma") + ": must be positive");
    comps.push_back(c);
  }
  return comps;
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return ss.str();
}

void write_text_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("error writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

void write_files_atomic(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  const bool created = !fs::exists(dir, ec) && fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir, ec)) throw IoError("cannot create directory '" + dir.string() + "'");

  std::vector<fs::path> staged;
  auto discard = [&] {
    std::error_code ignore;
    for (const auto& p : staged) fs::remove(p, ignore);
    if (created) fs::remove(dir, ignore);
  };
  for (const auto& [name, contents] : files) {
    const fs::path tmp = dir / (name + ".tmp");
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) staged.push_back(tmp);
    out << contents;
    out.flush();
    if (!out) {
      discard();
      throw IoError("error writing '" + (dir / name).string() + "'");
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    fs::rename(staged[i], dir / files[i].first, ec);
    if (ec) {
      discard();
      throw IoError("cannot move output into place at '" + (dir / files[i].first).string() + "'");
    }
  }
}

PointCloud parse_point_cloud(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool skipped_header = false;
  std::optional<int> header_line;
  std::string header_error;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    std::vector<double> row;
    bool ok = true;
    for (const auto& f : fields) {
      auto v = parse_double(f);
      if (!v) {
        ok = false;
        break;
      }
      row.push_back(*v);
    }
    if (!ok) {
      if (rows.empty() && !skipped_header) {
        skipped_header = true;
        header_line = line_no;
        header_error = "line " + std::to_string(line_no) + ": cannot parse '" + trim(line) + "' as coordinates";
        continue;
      }
      throw ValidationError("line " + std::to_string(line_no) + ": cannot parse '" + trim(line) + "' as coordinates");
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) +
                            " coordinates, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    if (header_line) throw ValidationError(header_error);
    throw ValidationError("point cloud file has no points");
  }
  PointCloud cloud(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      cloud(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  validate_point_cloud(cloud);
  return cloud;
}

PointCloud read_point_cloud(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return parse_point_cloud(text);
  } catch (const ValidationError& err) {
    throw ValidationError(path.string() + ": " + err.what());
  }
}

std::string format_point_cloud(const PointCloud& cloud) {
  std::string out;
  for (Eigen::Index i = 0; i < cloud.rows(); ++i) {
    for (Eigen::Index j = 0; j < cloud.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(cloud(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_point_cloud(const fs::path& path, const PointCloud& cloud) {
  write_text_atomic(path, format_point_cloud(cloud));
}

json diagram_to_json(const PersistenceDiagram& pd) {
  json points = json::array();
  for (const auto& p : pd.points) points.push_back({p.x(), p.y()});
  return {{"dim", pd.dim}, {"points", points}};
}

PersistenceDiagram diagram_from_json(const json& j) {
  Object o(j, "diagram");
  o.allow_only({"dim", "points"});
  PersistenceDiagram pd;
  pd.dim = o.integer("dim");
  if (pd.dim < 0) throw ValidationError("diagram.dim: must be non-negative");
  const json& pts = o.at("points");
  if (!pts.is_array()) throw ValidationError("diagram.points: expected an array");
  for (std::size_t i = 0; i < pts.size(); ++i)
    pd.points.push_back(point_from_json(pts[i], "diagram.points[" + std::to_string(i) + "]"));
  validate_diagram(pd);
  return pd;
}

json read_json(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw ValidationError(path.string() + ": invalid JSON: " + err.what());
  }
}

void write_json(const fs::path& path, const json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

PersistenceDiagram read_diagram(const fs::path& path) {
  const json j = read_json(path);
  return named(path.string(), [&] { return diagram_from_json(j); });
}

void write_diagram(const fs::path& path, const PersistenceDiagram& pd) { write_json(path, diagram_to_json(pd)); }

RunConfig config_from_json(const json& j) {
  Object root(j, "config");
  root.allow_only({"prior", "obs", "unexpected", "N_max", "grid", "classifier"});

  Object prior(root.at("prior"), "prior");
  prior.allow_only({"components", "N0", "rho_x", "cardinality_pmf"});
  auto comps = components_from_json(prior.at("components"), "c", "prior.components", true);
  if (comps.empty()) throw ValidationError("prior.components: at least one component required");
  GaussianMixtureIntensity intensity = named("prior.components", [&] { return GaussianMixtureIntensity(comps); });

  std::optional<BinomialCardinality> binomial;
  CardinalityPmf cardinality;
  if (prior.has("cardinality_pmf")) {
    if (prior.has("N0") || prior.has("rho_x"))
      throw ValidationError("prior: give either cardinality_pmf or N0/rho_x, not both");
    const json& arr = prior.at("cardinality_pmf");
    if (!arr.is_array() || arr.empty()) throw ValidationError("prior.cardinality_pmf: expected a non-empty array");
    Eigen::VectorXd probs(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t n = 0; n < arr.size(); ++n) {
      if (!arr[n].is_number()) throw ValidationError("prior.cardinality_pmf: expected numbers");
      probs(static_cast<Eigen::Index>(n)) = arr[n].get<double>();
    }
    cardinality = named("prior.cardinality_pmf", [&] { return CardinalityPmf(probs); });
  } else {
    const int n0 = prior.integer("N0");
    const double rho_x = prior.number("rho_x");
    if (n0 < 0) throw ValidationError("prior.N0: must be non-negative");
    if (!(rho_x >= 0.0 && rho_x <= 1.0)) throw ValidationError("prior.rho_x: out of range [0, 1]");
    binomial = BinomialCardinality(n0, rho_x);
    cardinality = CardinalityPmf::binomial(*binomial);
  }

  Object obs(root.at("obs"), "obs");
  obs.allow_only({"alpha", "sigma_yo"});
  const double alpha = obs.number("alpha");
  const double sigma_yo = obs.number("sigma_yo");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("obs.alpha: out of range [0, 1]");
  if (!(sigma_yo > 0.0)) throw ValidationError("obs.sigma_yo: must be positive");

  Object un(root.at("unexpected"), "unexpected");
  un.allow_only({"mu_yu", "M0", "rho_y"});
  const double mu_yu = un.number("mu_yu");
  const int m0 = un.integer("M0");
  const double rho_y = un.number("rho_y");
  if (!(mu_yu > 0.0)) throw ValidationError("unexpected.mu_yu: must be positive");
  if (m0 < 0) throw ValidationError("unexpected.M0: must be non-negative");
  if (!(rho_y >= 0.0 && rho_y <= 1.0)) throw ValidationError("unexpected.rho_y: out of range [0, 1]");

  RunConfig config{std::move(intensity),
                   std::move(cardinality),
                   binomial,
                   ObservationModel(alpha, sigma_yo),
                   UnexpectedModel(mu_yu, BinomialCardinality(m0, rho_y)),
                   std::nullopt,
                   {},
                   {}};

  if (root.has("N_max")) {
    const int n_max = root.integer("N_max");
    if (n_max < 0) throw ValidationError("N_max: must be non-negative");
    named("N_max", [&] { return config.prior_cardinality.resized(n_max); });
    config.n_max = n_max;
  }
  if (root.has("grid")) {
    Object g(root.at("grid"), "grid");
    g.allow_only({"b_max", "p_max", "nb", "np"});
    if (g.has("b_max")) config.grid.b_max = g.number("b_max");
    if (g.has("p_max")) config.grid.p_max = g.number("p_max");
    if (g.has("nb")) config.grid.nb = g.integer("nb");
    if (g.has("np")) config.grid.np = g.integer("np");
    if (!(config.grid.b_max > 0.0) || !(config.grid.p_max > 0.0)) throw ValidationError("grid: extent must be positive");
    if (config.grid.nb < 2 || config.grid.np < 2) throw ValidationError("grid: need at least 2 nodes per axis");
  }
  if (root.has("classifier")) {
    Object c(root.at("classifier"), "classifier");
    c.allow_only({"c", "k", "seed"});
    if (c.has("c")) config.classifier.c = c.number("c");
    if (c.has("k")) config.classifier.k = c.integer("k");
    if (c.has("seed")) {
      const json& s = c.at("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
        throw ValidationError("classifier.seed: expected a non-negative integer");
      config.classifier.seed = s.get<std::uint64_t>();
    }
    if (!(config.classifier.c > 0.0)) throw ValidationError("classifier.c: must be positive");
    if (config.classifier.k < 2) throw ValidationError("classifier.k: must be at least 2");
  }
  return config;
}

json config_to_json(const RunConfig& config) {
  json prior = {{"components", components_to_json(config.intensity.components(), "c")}};
  if (config.binomial) {
    prior["N0"] = config.binomial->n_max;
    prior["rho_x"] = config.binomial->p;
  } else {
    prior["cardinality_pmf"] = std::vector<double>(config.prior_cardinality.probs().begin(),
                                                   config.prior_cardinality.probs().end());
  }
  json j = {{"prior", prior},
            {"obs", {{"alpha", config.obs.alpha}, {"sigma_yo", config.obs.sigma_yo}}},
            {"unexpected",
             {{"mu_yu", config.unexpected.mu_yu},
              {"M0", config.unexpected.cardinality.n_max},
              {"rho_y", config.unexpected.cardinality.p}}},
            {"grid",
             {{"b_max", config.grid.b_max}, {"p_max", config.grid.p_max}, {"nb", config.grid.nb}, {"np", config.grid.np}}},
            {"classifier", {{"c", config.classifier.c}, {"k", config.classifier.k}, {"seed", config.classifier.seed}}}};
  if (config.n_max) j["N_max"] = *config.n_max;
  return j;
}

RunConfig read_config(const fs::path& path) {
  const json j = read_json(path);
  return named(path.string(), [&] { return config_from_json(j); });
}

json posterior_to_json(const PosteriorDistribution& post) {
  return {{"cardinality", std::vector<double>(post.cardinality.probs().begin(), post.cardinality.probs().end())},
          {"vanished_scale", post.vanished_scale},
          {"components", components_to_json(post.observed_components, "C")},
          {"m", post.m},
          {"prior_components", components_to_json(post.prior_intensity.components(), "c")}};
}

PosteriorDistribution posterior_from_json(const json& j) {
  Object o(j, "posterior");
  o.allow_only({"cardinality", "vanished_scale", "components", "m", "prior_components"});
  PosteriorDistribution post;
  const json& card = o.at("cardinality");
  if (!card.is_array() || card.empty()) throw ValidationError("posterior.cardinality: expected a non-empty array");
  Eigen::VectorXd probs(static_cast<Eigen::Index>(card.size()));
  for (std::size_t n = 0; n < card.size(); ++n) probs(static_cast<Eigen::Index>(n)) = card[n].get<double>();
  post.cardinality = CardinalityPmf(probs);
  post.vanished_scale = o.number("vanished_scale");
  if (!(post.vanished_scale >= 0.0)) throw ValidationError("posterior.vanished_scale: must be non-negative");
  post.observed_components = components_from_json(o.at("components"), "C", "posterior.components", false);
  post.m = o.integer("m");
  post.prior_intensity =
      GaussianMixtureIntensity(components_from_json(o.at("prior_components"), "c", "posterior.prior_components", true));
  return post;
}

void write_posterior(const fs::path& path, const PosteriorDistribution& post) {
  write_json(path, posterior_to_json(post));
}

std::string format_intensity_grid(const Eigen::MatrixXd& grid) {
  std::string out = "birth,persistence,intensity\n";
  for (Eigen::Index r = 0; r < grid.rows(); ++r)
    out += format_double(grid(r, 0)) + ',' + format_double(grid(r, 1)) + ',' + format_double(grid(r, 2)) + '\n';
  return out;
}

void write_intensity_grid(const fs::path& path, const Eigen::MatrixXd& grid) {
  write_text_atomic(path, format_intensity_grid(grid));
}

std::string format_cardinality(const CardinalityPmf& pmf) {
  std::string out = "n,probability\n";
  for (int n = 0; n <= pmf.n_max(); ++n) out += std::to_string(n) + ',' + format_double(pmf(n)) + '\n';
  return out;
}

void write_cardinality(const fs::path& path, const CardinalityPmf& pmf) {
  write_text_atomic(path, format_cardinality(pmf));
}

std::vector<LabeledDiagram> read_manifest(const fs::path& path) {
  const json j = read_json(path);
  if (!j.is_array()) throw ValidationError(path.string() + ": manifest must be a JSON list");
  const fs::path base = path.parent_path();
  std::vector<LabeledDiagram> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = path.string() + "[" + std::to_string(i) + "]";
    Object o(j[i], where);
    o.allow_only({"label", "diagram"});
    const json& label = o.at("label");
    if (!label.is_string()) throw ValidationError(where + ".label: expected a string");
    const json& d = o.at("diagram");
    LabeledDiagram item{label.get<std::string>(), {}};
    if (d.is_string()) {
      fs::path p = d.get<std::string>();
      if (p.is_relative()) p = base / p;
      item.diagram = read_diagram(p);
    } else {
      item.diagram = named(where, [&] { return diagram_from_json(d); });
    }
    out.push_back(std::move(item));
  }
  return out;
}

json report_to_json(const EvalReport& report) {
  json confusion = json::array();
  for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) row.push_back(report.confusion(r, c));
    confusion.push_back(row);
  }
  json preds = json::array();
  for (const auto& p : report.predictions)
    preds.push_back({{"instance", p.instance},
                     {"fold", p.fold},
                     {"truth", report.classes[p.truth]},
                     {"predicted", report.classes[p.predicted]},
                     {"votes", p.votes}});
  return {{"classes", report.classes},
          {"folds", report.folds},
          {"auc", report.auc},
          {"confusion", confusion},
          {"predictions", preds}};
}

}  // namespace pdbayes::io

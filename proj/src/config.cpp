#include "levyfield/config.hpp"

#include <fstream>
#include <stdexcept>

#include "levyfield/errors.hpp"

namespace levyfield {

using nlohmann::json;

namespace {

LatticePoint parse_point(const json& j, int dim, const std::string& key) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw std::invalid_argument("'" + key + "' entries must be integer arrays of length " + std::to_string(dim));
  LatticePoint p(dim);
  for (int i = 0; i < dim; ++i) p[i] = j[static_cast<std::size_t>(i)].get<std::int64_t>();
  return p;
}

json point_json(const LatticePoint& p) {
  json a = json::array();
  for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
  return a;
}

double param(const json& params, const char* key, double fallback) {
  return params.contains(key) ? params.at(key).get<double>() : fallback;
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::mean_clt: return "mean_clt";
    case Experiment::acov_clt: return "acov_clt";
    case Experiment::spde: return "spde";
    case Experiment::diag: return "diag";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  if (name == "mean_clt" || name == "mean-clt") return Experiment::mean_clt;
  if (name == "acov_clt" || name == "acov-clt") return Experiment::acov_clt;
  if (name == "spde") return Experiment::spde;
  if (name == "diag") return Experiment::diag;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

Kernel KernelSpec::build(int dim) const {
  if (type == "box") {
    if (!params.contains("lo") && !params.contains("hi")) return box_kernel(dim);
    std::vector<double> lo(static_cast<std::size_t>(dim), 0.0), hi(static_cast<std::size_t>(dim), 1.0);
    if (params.contains("lo")) lo = params.at("lo").get<std::vector<double>>();
    if (params.contains("hi")) hi = params.at("hi").get<std::vector<double>>();
    if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
      throw std::invalid_argument("box kernel 'lo'/'hi' must have one entry per dimension");
    return indicator_kernel(lo, hi);
  }
  if (type == "exp") return exp_kernel(dim, param(params, "rate", 1.0));
  if (type == "gauss") return gauss_kernel(dim, param(params, "scale", 1.0));
  if (type == "green3d") {
    if (dim != 3) throw std::invalid_argument("green3d kernel needs dimension 3");
    return green3d(param(params, "mu", 1.0), param(params, "prefactor", kInvFourPi));
  }
  if (type == "zero") return zero_kernel(dim);
  throw std::invalid_argument("unknown kernel type '" + type + "'");
}

Provenance SamplingSpec::provenance() const {
  if (type == "box") return BoxProvenance{};
  if (type == "bernoulli") return BernoulliProvenance{p};
  if (type == "thresholded_ma") return ThresholdedMaProvenance{coeffs, threshold};
  throw std::invalid_argument("unknown sampling type '" + type + "'");
}

void ExperimentConfig::validate() const {
  if (dimension < 1 || dimension > kMaxDim) throw std::invalid_argument("'dimension' must be in 1..4");
  quadrature.validate();
  if (replicates < 1) throw std::invalid_argument("'replicates' must be >= 1");
  if (sampling.n < 1) throw std::invalid_argument("'sampling.n' must be >= 1");
  if (sampling.type == "bernoulli" && !(sampling.p > 0.0 && sampling.p <= 1.0))
    throw std::invalid_argument("'sampling.p' must lie in (0, 1]");
  if (sampling.type == "thresholded_ma" && sampling.coeffs.empty())
    throw std::invalid_argument("'sampling.coeffs' must be nonempty");
  (void)sampling.provenance();
  (void)kernel.build(dimension);
  for (const auto& l : lags)
    if (l.dim() != dimension) throw std::invalid_argument("'lags' entries must match the dimension");
  if (window_halfwidth && *window_halfwidth < 1) throw std::invalid_argument("'window_halfwidth' must be >= 1");
  const MomentSet m = derive_moments(triplet);
  switch (experiment) {
    case Experiment::acov_clt:
      if (lags.empty()) throw std::invalid_argument("acov_clt needs at least one lag");
      if (m.mean != 0.0) throw DomainError("acov_clt needs a mean-zero basis (set the drift so E L([0,1]^d) = 0)");
      if (!(m.sigma2 > 0.0)) throw DomainError("acov_clt needs a basis with positive variance");
      break;
    case Experiment::spde:
      if (dimension != 3) throw std::invalid_argument("spde needs dimension 3");
      if (kernel.type != "green3d") throw std::invalid_argument("spde needs the green3d kernel");
      if (m.mean == 0.0) throw DomainError("spde needs E L([0,1]^3) != 0");
      if (sampling.type != "box") throw std::invalid_argument("spde uses box sampling sets");
      break;
    default:
      break;
  }
  for (auto n : n_grid)
    if (n < 1) throw std::invalid_argument("'n_grid' entries must be >= 1");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (radii[i] < 0 || (i > 0 && radii[i] <= radii[i - 1]))
      throw std::invalid_argument("'radii' must be nonnegative and increasing");
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  c.experiment = parse_experiment(j.at("experiment").get<std::string>());
  c.dimension = j.value("dimension", 1);
  if (j.contains("triplet")) {
    const json& t = j.at("triplet");
    std::vector<JumpAtom> jumps;
    for (const auto& a : t.value("jumps", json::array()))
      jumps.push_back({a.at("mass").get<double>(), a.at("size").get<double>()});
    c.triplet = LevyTriplet(t.value("gaussian_var", 0.0), t.value("drift", 0.0), std::move(jumps));
  }
  if (j.contains("kernel")) {
    c.kernel.type = j.at("kernel").at("type").get<std::string>();
    c.kernel.params = j.at("kernel").value("params", json::object());
  }
  if (j.contains("quadrature")) {
    c.quadrature.resolution = j.at("quadrature").value("resolution", c.quadrature.resolution);
    c.quadrature.box_halfwidth = j.at("quadrature").value("box_halfwidth", c.quadrature.box_halfwidth);
  }
  if (j.contains("sampling")) {
    const json& s = j.at("sampling");
    c.sampling.type = s.value("type", std::string("box"));
    c.sampling.n = s.value("n", c.sampling.n);
    c.sampling.p = s.value("p", c.sampling.p);
    c.sampling.threshold = s.value("threshold", 0.0);
    for (const auto& e : s.value("coeffs", json::array()))
      c.sampling.coeffs[parse_point(e.at("lag"), c.dimension, "sampling.coeffs.lag")] = e.at("value").get<double>();
  }
  for (const auto& l : j.value("lags", json::array())) c.lags.push_back(parse_point(l, c.dimension, "lags"));
  c.replicates = j.value("replicates", c.replicates);
  c.root_seed = j.value("root_seed", c.root_seed);
  c.output_dir = j.value("output", j.value("output_dir", c.output_dir));
  c.n_grid = j.value("n_grid", std::vector<std::int64_t>{});
  if (c.n_grid.empty()) c.n_grid = {c.sampling.n};
  c.radii = j.value("radii", c.radii);
  if (j.contains("window_halfwidth")) c.window_halfwidth = j.at("window_halfwidth").get<std::int64_t>();
  c.threads = j.value("threads", 1u);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  return parse_config(json::parse(in));
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["dimension"] = c.dimension;
  json jumps = json::array();
  for (const auto& a : c.triplet.jumps()) jumps.push_back({{"mass", a.mass}, {"size", a.size}});
  j["triplet"] = {{"gaussian_var", c.triplet.gaussian_var()}, {"drift", c.triplet.drift()}, {"jumps", jumps}};
  j["kernel"] = {{"type", c.kernel.type}, {"params", c.kernel.params}};
  j["quadrature"] = {{"resolution", c.quadrature.resolution}, {"box_halfwidth", c.quadrature.box_halfwidth}};
  json s = {{"type", c.sampling.type}, {"n", c.sampling.n}};
  if (c.sampling.type == "bernoulli") s["p"] = c.sampling.p;
  if (c.sampling.type == "thresholded_ma") {
    json co = json::array();
    for (const auto& [l, a] : c.sampling.coeffs) co.push_back({{"lag", point_json(l)}, {"value", a}});
    s["coeffs"] = co;
    s["threshold"] = c.sampling.threshold;
  }
  j["sampling"] = s;
  json lags = json::array();
  for (const auto& l : c.lags) lags.push_back(point_json(l));
  j["lags"] = lags;
  j["replicates"] = c.replicates;
  j["root_seed"] = c.root_seed;
  j["output"] = c.output_dir;
  j["n_grid"] = c.n_grid;
  j["radii"] = c.radii;
  if (c.window_halfwidth) j["window_halfwidth"] = *c.window_halfwidth;
  j["threads"] = c.threads;
  return j;
}

}  // namespace levyfield

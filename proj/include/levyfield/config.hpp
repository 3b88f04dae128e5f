#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyfield/kernels.hpp"
#include "levyfield/lattice.hpp"
#include "levyfield/levy_basis.hpp"
#include "levyfield/quadrature.hpp"
#include "levyfield/sampling.hpp"

namespace levyfield {

enum class Experiment { mean_clt, acov_clt, spde, diag };

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);

/// {type: box|exp|gauss|green3d|zero, params: {...}}
struct KernelSpec {
  std::string type = "box";
  nlohmann::json params = nlohmann::json::object();

  Kernel build(int dim) const;
};

/// {type: box|bernoulli|thresholded_ma, n, p?, coeffs?, threshold?}
struct SamplingSpec {
  std::string type = "box";
  std::int64_t n = 16;
  double p = 0.5;
  std::map<LatticePoint, double> coeffs;
  double threshold = 0.0;

  Provenance provenance() const;
  bool random() const { return type != "box"; }
};

struct ExperimentConfig {
  Experiment experiment = Experiment::mean_clt;
  int dimension = 1;
  LevyTriplet triplet = LevyTriplet::gaussian(1.0);
  KernelSpec kernel;
  QuadratureSpec quadrature;
  SamplingSpec sampling;
  std::vector<LatticePoint> lags;
  std::size_t replicates = 1000;
  std::uint64_t root_seed = 1;
  std::string output_dir = "out";
  std::vector<std::int64_t> n_grid;
  std::vector<std::int64_t> radii = {1, 2, 4, 8};
  std::optional<std::int64_t> window_halfwidth;
  unsigned threads = 1;

  /// Throws std::invalid_argument / DomainError with a message naming the key.
  void validate() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& c);

}  // namespace levyfield

#include "levyfield/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "levyfield/asymptotics.hpp"
#include "levyfield/errors.hpp"
#include "levyfield/estimators.hpp"
#include "levyfield/field_sim.hpp"
#include "levyfield/numerics.hpp"
#include "levyfield/random.hpp"
#include "levyfield/summation.hpp"

namespace levyfield {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json point_json(const LatticePoint& p) {
  json a = json::array();
  for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
  return a;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json matrix_json(const std::vector<std::vector<double>>& m) {
  json a = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (double x : row) r.push_back(finite_or_null(x));
    a.push_back(r);
  }
  return a;
}

SamplingSet draw_set(const SamplingSpec& spec, int dim, const RngStream& stream) {
  if (spec.type == "box") return box_set(spec.n, dim);
  if (spec.type == "bernoulli") return bernoulli_set(spec.n, dim, spec.p, stream);
  return thresholded_ma_set(spec.n, dim, spec.coeffs, spec.threshold, stream);
}

CLTReport start_report(const ExperimentConfig& c) {
  c.validate();
  CLTReport r;
  r.experiment = experiment_name(c.experiment);
  r.config = to_json(c);
  r.root_seed = c.root_seed;
  return r;
}

// Column-wise summaries over the non-degenerate rows.
void summarize(CLTReport& r) {
  std::vector<std::vector<double>> kept;
  for (std::size_t i = 0; i < r.statistics.size(); ++i)
    if (!r.degenerate[i]) kept.push_back(r.statistics[i]);
  r.skipped = r.statistics.size() - kept.size();
  if (r.statistics.size() > 0 && static_cast<double>(r.skipped) > 0.01 * static_cast<double>(r.statistics.size()))
    r.warnings.push_back(std::to_string(r.skipped) + " of " + std::to_string(r.statistics.size()) +
                         " replicates were degenerate and skipped (more than 1%)");
  const std::size_t m = r.columns.size();
  r.marginals.clear();
  if (kept.size() >= 2) r.empirical_cov = sample_covariance(kept);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> col;
    for (const auto& row : kept) col.push_back(row[j]);
    const double v = r.v_theory.at(j).at(j);
    if (col.size() < 30) {
      NormalitySummary s;
      s.count = col.size();
      s.degenerate = true;
      s.v_theory = v;
      r.marginals.push_back(s);
      r.warnings.push_back("column " + r.columns[j] + " has fewer than 30 usable replicates");
      continue;
    }
    NormalitySummary s;
    try {
      s = normality_summary(col, v);
    } catch (const std::invalid_argument&) {
      s = normality_summary(col, 1.0);
      s.ks_statistic = s.ks_pvalue = kNaN;
      s.v_theory = v;
      r.warnings.push_back("column " + r.columns[j] + " has v_theory <= 0; KS skipped");
    }
    r.marginals.push_back(s);
  }
}

void check_truncation(CLTReport& r) {
  double vmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < r.columns.size(); ++j) vmin = std::min(vmin, std::abs(r.v_theory[j][j]));
  r.truncation_dominated = r.tail_bound > 0.0 && !(r.tail_bound < 0.01 * vmin);
  if (r.truncation_dominated) r.warnings.push_back("truncation-dominated: tail bound >= 1% of v_theory");
}

std::vector<std::vector<double>> diagonal(const std::vector<double>& d) {
  std::vector<std::vector<double>> m(d.size(), std::vector<double>(d.size(), kNaN));
  for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
  return m;
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const unsigned n = std::min<std::size_t>(threads, count);
  for (unsigned t = 0; t < n; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

CLTReport run_mean_clt(const ExperimentConfig& c) {
  CLTReport r = start_report(c);
  const int d = c.dimension;
  const Kernel kernel = c.kernel.build(d);
  const MomentSet m = derive_moments(c.triplet);
  const SamplingSet full = box_set(c.sampling.n, d);
  const Simulator sim(kernel, c.triplet, std::vector<LatticePoint>(full.points().begin(), full.points().end()),
                      c.quadrature, c.window_halfwidth);
  const double centre = m.mean * sim.plan().kernel_integral();
  const RngStream root(c.root_seed);

  r.columns = {"statistic"};
  r.statistics.assign(c.replicates, {kNaN});
  r.degenerate.assign(c.replicates, false);
  std::vector<char> degenerate(c.replicates, 0);
  parallel_for(c.replicates, c.threads, [&](std::size_t i) {
    const RngStream rs = root.derive(i);
    RngStream noise = rs.derive(2);
    const SamplingSet set = draw_set(c.sampling, d, rs.derive(1));
    if (set.empty()) {
      degenerate[i] = 1;
      return;
    }
    const FieldSample field = sim.run(noise);
    PairwiseAccumulator acc;
    for (const auto& t : set.points()) acc.add(field.value(t) - centre);
    r.statistics[i][0] = acc.sum() / std::sqrt(static_cast<double>(set.size()));
  });
  for (std::size_t i = 0; i < c.replicates; ++i) r.degenerate[i] = degenerate[i] != 0;

  const PairWeights weights = limit_weights(c.sampling.provenance(), d);
  const AvarResult avar = mean_avar(kernel, m.sigma2, weights, c.quadrature);
  r.v_theory = {{avar.value}};
  r.tail_bound = avar.tail_bound;
  summarize(r);
  check_truncation(r);
  json breakdown = json::array();
  for (const auto& t : avar.term_breakdown) breakdown.push_back({{"lag", point_json(t.lag)}, {"term", t.value}});
  r.details["centre"] = centre;
  r.details["kernel_integral"] = sim.plan().kernel_integral();
  r.details["inclusion_probability"] = inclusion_probability(c.sampling.provenance());
  r.details["window_halfwidth"] = sim.window_halfwidth();
  r.details["simulation_truncation_bound"] = finite_or_null(m.sigma2 * sim.plan().tail_bound());
  r.details["term_breakdown"] = breakdown;
  if (!r.marginals.empty() && r.v_theory[0][0] > 0.0)
    r.details["variance_ratio"] = r.marginals[0].variance / r.v_theory[0][0];
  return r;
}

CLTReport run_acov_clt(const ExperimentConfig& c) {
  CLTReport r = start_report(c);
  const int d = c.dimension;
  const Kernel kernel = c.kernel.build(d);
  const MomentSet m = derive_moments(c.triplet);
  const SamplingSet full = box_set(c.sampling.n, d);
  const Simulator sim(kernel, c.triplet, lagged_cover(full.points(), c.lags), c.quadrature, c.window_halfwidth);
  const SampledKernel fs(kernel, c.quadrature);
  std::vector<double> gamma;
  for (const auto& l : c.lags) gamma.push_back(m.sigma2 * SampledKernel::lag_product(fs, fs, l));
  const RngStream root(c.root_seed);
  const std::size_t nl = c.lags.size();

  for (const auto& l : c.lags) r.columns.push_back("lag" + l.to_string());
  r.statistics.assign(c.replicates, std::vector<double>(nl, kNaN));
  r.degenerate.assign(c.replicates, false);
  std::vector<char> degenerate(c.replicates, 0);
  parallel_for(c.replicates, c.threads, [&](std::size_t i) {
    const RngStream rs = root.derive(i);
    RngStream noise = rs.derive(2);
    const SamplingSet set = draw_set(c.sampling, d, rs.derive(1));
    if (set.empty()) {
      degenerate[i] = 1;
      return;
    }
    const FieldSample field = sim.run(noise);
    const AcovEstimate est = sample_acov(field, set, c.lags);
    const double root_n = std::sqrt(static_cast<double>(set.size()));
    for (std::size_t j = 0; j < nl; ++j) r.statistics[i][j] = root_n * (est.values[j] - gamma[j]);
  });
  for (std::size_t i = 0; i < c.replicates; ++i) r.degenerate[i] = degenerate[i] != 0;

  const PairWeights weights = limit_weights(c.sampling.provenance(), d);
  const AvarResult V = acov_avar(kernel, c.triplet, c.lags, weights, c.quadrature, PairingForm::standard);
  const AvarResult W = acov_avar(kernel, c.triplet, c.lags, weights, c.quadrature, PairingForm::swapped);
  r.v_theory = V.matrix;
  r.tail_bound = V.tail_bound;
  summarize(r);
  check_truncation(r);

  r.details["gamma"] = gamma;
  r.details["v_standard"] = matrix_json(V.matrix);
  r.details["v_swapped"] = matrix_json(W.matrix);
  r.details["truncation_radius"] = V.truncation_radius;
  if (!r.empirical_cov.empty()) {
    double trace = 0.0;
    for (std::size_t j = 0; j < nl; ++j) trace += V.matrix[j][j];
    std::vector<std::vector<double>> es(nl, std::vector<double>(nl)), ew = es;
    for (std::size_t p = 0; p < nl; ++p)
      for (std::size_t q = 0; q < nl; ++q) {
        es[p][q] = std::abs(r.empirical_cov[p][q] - V.matrix[p][q]) / trace;
        ew[p][q] = std::abs(r.empirical_cov[p][q] - W.matrix[p][q]) / trace;
      }
    r.details["relative_error_standard"] = matrix_json(es);
    r.details["relative_error_swapped"] = matrix_json(ew);
  }
  if (m.mean != 0.0) r.warnings.push_back("basis mean is nonzero; gamma* is not mean-corrected");
  return r;
}

CLTReport run_spde(const ExperimentConfig& c) {
  CLTReport r = start_report(c);
  const int d = c.dimension;
  const Kernel kernel = c.kernel.build(d);
  const MomentSet m = derive_moments(c.triplet);
  const double mu = c.kernel.params.value("mu", 1.0);
  const double prefactor = c.kernel.params.value("prefactor", kInvFourPi);
  // levy_mean / E X(0) with E X(0) = levy_mean * 4 pi prefactor / mu.
  const double target = mu / (4.0 * std::numbers::pi * prefactor);

  std::vector<std::int64_t> ns = c.n_grid;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  const SamplingSet full = box_set(ns.back(), d);
  const Simulator sim(kernel, c.triplet, std::vector<LatticePoint>(full.points().begin(), full.points().end()),
                      c.quadrature, c.window_halfwidth);
  std::vector<SamplingSet> sets;
  for (auto n : ns) sets.push_back(box_set(n, d));
  const RngStream root(c.root_seed);

  for (auto n : ns) {
    r.columns.push_back("inv_stat_n" + std::to_string(n));
    r.columns.push_back("mu_stat_n" + std::to_string(n));
  }
  const std::size_t nc = r.columns.size();
  r.statistics.assign(c.replicates, std::vector<double>(nc, kNaN));
  r.degenerate.assign(c.replicates, false);
  std::vector<std::vector<double>> mu_hat(c.replicates, std::vector<double>(ns.size(), kNaN));
  std::vector<char> degenerate(c.replicates, 0);
  parallel_for(c.replicates, c.threads, [&](std::size_t i) {
    RngStream noise = root.derive(i).derive(2);
    const FieldSample field = sim.run(noise);
    for (std::size_t k = 0; k < ns.size(); ++k) {
      double est;
      try {
        est = spde_mu_hat(field, sets[k], m.mean);
      } catch (const DegenerateError&) {
        degenerate[i] = 1;
        return;
      }
      const double root_n = std::sqrt(static_cast<double>(sets[k].size()));
      mu_hat[i][k] = est;
      r.statistics[i][2 * k] = root_n * (1.0 / est - 1.0 / target);
      r.statistics[i][2 * k + 1] = root_n * (est - target);
    }
  });
  for (std::size_t i = 0; i < c.replicates; ++i) r.degenerate[i] = degenerate[i] != 0;

  const AvarResult limit = mean_avar(kernel, m.sigma2, PairWeights(d, WeightSource::exact, 1.0), c.quadrature, 0);
  const std::vector<AvarResult> finite = box_mean_var(kernel, m.sigma2, ns, c.quadrature);
  const double lm2 = m.mean * m.mean;
  std::vector<double> vdiag;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    vdiag.push_back(finite[k].value / lm2);
    vdiag.push_back(std::pow(target, 4) * finite[k].value / lm2);
  }
  r.v_theory = diagonal(vdiag);
  r.tail_bound = limit.tail_bound / lm2;
  summarize(r);
  check_truncation(r);

  json per_n = json::array();
  for (std::size_t k = 0; k < ns.size(); ++k) {
    std::vector<double> col;
    for (std::size_t i = 0; i < c.replicates; ++i)
      if (!r.degenerate[i]) col.push_back(mu_hat[i][k]);
    double mean = 0.0, sd = 0.0;
    if (!col.empty()) {
      mean = pairwise_sum(col) / static_cast<double>(col.size());
      PairwiseAccumulator acc;
      for (double x : col) acc.add((x - mean) * (x - mean));
      sd = col.size() > 1 ? std::sqrt(acc.sum() / static_cast<double>(col.size() - 1)) : 0.0;
    }
    per_n.push_back({{"n", ns[k]},
                     {"set_size", sets[k].size()},
                     {"mu_hat_mean", mean},
                     {"mu_hat_sd", sd},
                     {"standard_error", col.empty() ? 0.0 : sd / std::sqrt(static_cast<double>(col.size()))},
                     {"bias", mean - target},
                     {"v_inverse_finite_n", finite[k].value / lm2},
                     {"v_inverse_limit", limit.value / lm2}});
  }
  r.details["per_n"] = per_n;
  r.details["target_mu"] = target;
  r.details["kernel_integral"] = sim.plan().kernel_integral();
  r.details["kernel_integral_exact"] = 1.0 / target;
  r.details["v_inverse_limit"] = limit.value / lm2;
  r.details["window_halfwidth"] = sim.window_halfwidth();
  r.details["simulation_truncation_bound"] = finite_or_null(m.sigma2 * sim.plan().tail_bound());
  return r;
}

CLTReport run_diag(const ExperimentConfig& c) {
  CLTReport r = start_report(c);
  const int d = c.dimension;
  const Kernel kernel = c.kernel.build(d);
  const Provenance prov = c.sampling.provenance();
  const PairWeights limit = limit_weights(prov, d);

  const SummabilityReport s = summability_diagnostic(kernel, limit, c.quadrature, c.radii);
  json summability = json::array();
  for (std::size_t i = 0; i < s.radii.size(); ++i)
    summability.push_back({{"radius", s.radii[i]},
                           {"partial_sum", s.partial_sums[i]},
                           {"tail_bound", finite_or_null(s.tail_bounds[i])}});
  r.details["summability"] = {{"epsilon", s.epsilon},
                              {"weighted_norm", finite_or_null(s.weighted_norm)},
                              {"plateau_ratio", s.plateau_ratio},
                              {"rows", summability}};

  LatticePoint lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -2;
    hi[i] = 3;
  }
  const std::vector<LatticePoint> shifts = LatticeBox(lo, hi).points();
  const FolnerReport f = folner_diagnostics(c.n_grid, shifts, d);
  json defects = json::array();
  for (const auto& x : f.defects)
    defects.push_back({{"n", x.n}, {"shift", point_json(x.shift)}, {"defect", x.defect}});
  r.details["folner"] = {{"tempered_constant", f.tempered_constant}, {"tempered_ratios", f.tempered_ratios},
                         {"defects", defects}};

  std::vector<LatticePoint> lags = c.lags;
  if (lags.empty()) {
    LatticePoint e(d);
    e[d - 1] = 1;
    lags = {LatticePoint::zero(d), e};
  }
  const RngStream root(c.root_seed);
  json weights = json::array();
  for (auto n : c.n_grid) {
    const SamplingSet set = draw_set(c.sampling, d, root.derive(static_cast<std::uint64_t>(n)));
    if (set.empty()) {
      r.warnings.push_back("empty sampling set at n = " + std::to_string(n));
      continue;
    }
    const PairWeights w = pair_weights(set, lags);
    for (const auto& l : lags)
      weights.push_back({{"n", n}, {"lag", point_json(l)}, {"a_n", w.at(l)}, {"a_limit", limit.at(l)}});
  }
  r.details["pair_weights"] = weights;
  return r;
}

CLTReport run_experiment(const ExperimentConfig& c) {
  switch (c.experiment) {
    case Experiment::mean_clt: return run_mean_clt(c);
    case Experiment::acov_clt: return run_acov_clt(c);
    case Experiment::spde: return run_spde(c);
    case Experiment::diag: return run_diag(c);
  }
  throw std::invalid_argument("unknown experiment");
}

json summary_json(const CLTReport& r) {
  json j;
  j["experiment"] = r.experiment;
  j["library_version"] = LEVYFIELD_VERSION;
  j["root_seed"] = r.root_seed;
  j["replicates"] = r.replicates();
  j["skipped"] = r.skipped;
  j["tail_bound"] = finite_or_null(r.tail_bound);
  j["truncation_dominated"] = r.truncation_dominated;
  j["warnings"] = r.warnings;
  json cols = json::array();
  for (std::size_t k = 0; k < r.marginals.size(); ++k) {
    const auto& s = r.marginals[k];
    cols.push_back({{"name", r.columns[k]},
                    {"v_theory", finite_or_null(s.v_theory)},
                    {"count", s.count},
                    {"mean", finite_or_null(s.mean)},
                    {"variance", finite_or_null(s.variance)},
                    {"skewness", finite_or_null(s.skewness)},
                    {"excess_kurtosis", finite_or_null(s.excess_kurtosis)},
                    {"ks_statistic", finite_or_null(s.ks_statistic)},
                    {"ks_pvalue", finite_or_null(s.ks_pvalue)},
                    {"degenerate", s.degenerate}});
  }
  j["columns"] = cols;
  j["empirical_cov"] = matrix_json(r.empirical_cov);
  j["v_theory"] = matrix_json(r.v_theory);
  j["details"] = r.details;
  j["config"] = r.config;
  return j;
}

std::string replicates_csv(const CLTReport& r) {
  std::ostringstream out;
  out << "replicate_index";
  for (const auto& c : r.columns) out << ',' << c;
  out << ",degenerate_flag\n";
  for (std::size_t i = 0; i < r.statistics.size(); ++i) {
    out << i;
    for (double x : r.statistics[i]) out << ',' << fmt(x);
    out << ',' << (r.degenerate[i] ? 1 : 0) << '\n';
  }
  return out.str();
}

void write_report(const CLTReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "replicates.csv");
    csv << replicates_csv(r);
  }
  std::ofstream js(dir / "summary.json");
  js << summary_json(r).dump(2) << '\n';
  if (!js) throw std::runtime_error("failed to write " + (dir / "summary.json").string());
}

}  // namespace levyfield

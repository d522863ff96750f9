// Experiment orchestration for the CLI: reproducible random-ensemble runs,
// single-set analysis reports, cut-off sweeps, and machine-readable output.
// All randomness is a pure function of (seed, trial index, stream tag), so a
// given config produces byte-identical output for any worker count.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cyclemix/cyclic_walk.hpp"
#include "cyclemix/genset.hpp"
#include "cyclemix/lattice.hpp"
#include "cyclemix/power2.hpp"

namespace cyclemix {

struct ExperimentConfig {
  std::string command;
  std::vector<std::uint64_t> p_grid;  // one or more moduli
  std::size_t k = 1;
  std::string k_rule;      // "" (use k) or "logp_over_loglogp"
  std::string half;        // explicit half list for analyze/theta
  std::uint64_t trials = 1;
  std::uint64_t seed = 1;
  std::vector<double> eps;  // defaults to {1/e}
  std::vector<double> rho;  // defaults to {1.5, 2}
  std::size_t mc_samples = 100000;
  std::uint64_t clt_n = 256;
  std::size_t clt_k = 1;
  double theta_t = 1.0;
  double tol = 1e-10;
  unsigned jobs = 1;
  std::string format = "json";  // json | csv
  std::string out;              // output path, empty = stdout

  std::uint64_t p() const;
  std::size_t resolve_k(std::uint64_t p) const;
  std::vector<double> eps_or_default() const;
  std::vector<double> rho_or_default() const;
};

struct TrialRecord {
  std::uint64_t trial = 0;
  std::vector<std::uint64_t> half;
  double ell = 0.0;
  double gap = 0.0;
  double t_rel = 0.0;
  std::vector<std::pair<double, std::uint64_t>> t_mix;  // (eps, steps), first entry is 1/e
  double diam_geom = 0.0;
  double ratio_trel = 0.0;       // t_mix(1/e) / t_rel
  double ratio_benchmark = 0.0;  // t_mix(1/e) / ((k / 2 pi e) p^{2/k})
  bool contraction_consistent = true;  // t_mix(eps) >= ln(1/2eps) t_rel within a step
};

struct ShortVectorTail {
  double rho = 0.0;
  double empirical = 0.0;  // fraction of trials with t_rel >= (e/pi) rho^2 p^{2/k}
  double predicted = 0.0;  // 1 / (2 rho^k)
  double std_error = 0.0;  // binomial
};

struct RandomSummary {
  double benchmark = 0.0;  // (k / 2 pi e) p^{2/k}
  double median_ratio_benchmark = 0.0;  // nearest-rank median
  double min_ratio_trel = 0.0;
  double max_ratio_trel = 0.0;
  double fraction_ratio_below_tau0_slack = 0.0;  // ratio_trel < tau0 - 0.05
  std::vector<ShortVectorTail> tails;
};

struct RandomExperiment {
  std::uint64_t p = 0;
  std::size_t k = 0;
  std::vector<TrialRecord> records;
  RandomSummary summary;
};

RandomExperiment run_random(const ExperimentConfig& cfg);

struct AnalyzeResult {
  GenSet a;
  MixingReport report;
  LatticeGeometry geometry;
  WindowReport window;
};

AnalyzeResult run_analyze(const ExperimentConfig& cfg);

std::vector<CutoffReport> run_power2(const ExperimentConfig& cfg);  // one per grid entry

// Runs body(i) for i in [0, n) across `jobs` workers; results must be written
// into per-index slots so aggregation order is fixed.
void parallel_for(unsigned jobs, std::uint64_t n, const std::function<void(std::uint64_t)>& body);

// Rendered output documents (JSON schema documented in the README).
std::string render_random(const ExperimentConfig& cfg, const RandomExperiment& ex);
std::string render_analyze(const ExperimentConfig& cfg, const AnalyzeResult& res);
std::string render_power2(const ExperimentConfig& cfg, const std::vector<CutoffReport>& reports);
std::string render_scalar(const ExperimentConfig& cfg, const std::string& name, double value);
std::string render_theta(const ExperimentConfig& cfg, double estimate, double std_error,
                         double projection_tv);

// Shortest round-trip decimal (used for CSV cells).
std::string format_double(double v);

double tau0_cached();

}  // namespace cyclemix

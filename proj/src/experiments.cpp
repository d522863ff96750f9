#include "cyclemix/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "cyclemix/theta.hpp"

namespace cyclemix {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
using Json = nlohmann::ordered_json;
}  // namespace

std::uint64_t ExperimentConfig::p() const {
  if (p_grid.empty()) throw ValidationError("config: no modulus given (use --p)");
  return p_grid.front();
}

std::size_t ExperimentConfig::resolve_k(std::uint64_t p) const {
  if (k_rule.empty()) return k;
  if (k_rule == "logp_over_loglogp") {
    const double lp = std::log(static_cast<double>(p));
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(lp / std::log(lp))));
  }
  throw ValidationError("config: unknown k rule '" + k_rule + "'");
}

std::vector<double> ExperimentConfig::eps_or_default() const {
  return eps.empty() ? std::vector<double>{std::exp(-1.0)} : eps;
}

std::vector<double> ExperimentConfig::rho_or_default() const {
  return rho.empty() ? std::vector<double>{1.5, 2.0} : rho;
}

double tau0_cached() {
  static const double v = tau0(1e-10);
  return v;
}

void parallel_for(unsigned jobs, std::uint64_t n, const std::function<void(std::uint64_t)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  const unsigned count = static_cast<unsigned>(std::min<std::uint64_t>(jobs, n));
  workers.reserve(count);
  for (unsigned w = 0; w < count; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

RandomExperiment run_random(const ExperimentConfig& cfg) {
  const std::uint64_t p = cfg.p();
  const std::size_t k = cfg.resolve_k(p);
  if (cfg.trials < 1) throw ValidationError("random: need at least one trial");
  const std::vector<double> eps_list = cfg.eps_or_default();
  const double e_inv = std::exp(-1.0);

  RandomExperiment ex;
  ex.p = p;
  ex.k = k;
  ex.records.resize(cfg.trials);

  parallel_for(cfg.jobs, cfg.trials, [&](std::uint64_t i) {
    SplitRng rng(cfg.seed, i);
    const GenSet a = sample_genset(p, k, rng);
    const WalkAnalyzer walk(a);
    TrialRecord rec;
    rec.trial = i;
    rec.half = a.half;
    rec.gap = walk.gap();
    rec.t_rel = walk.relaxation();
    rec.ell = shortest_dual(lattice_of(a)).norm;
    rec.diam_geom = geometric_diameter(a);
    const std::uint64_t tmix_std = walk.mixing_time(e_inv);
    rec.t_mix.emplace_back(e_inv, tmix_std);
    for (double e : eps_list) {
      if (std::abs(e - e_inv) < 1e-15) continue;
      rec.t_mix.emplace_back(e, walk.mixing_time(e));
    }
    rec.ratio_trel = static_cast<double>(tmix_std) / rec.t_rel;
    const double benchmark = static_cast<double>(k) / (2.0 * kPi * std::exp(1.0)) *
                             std::pow(static_cast<double>(p), 2.0 / static_cast<double>(k));
    rec.ratio_benchmark = static_cast<double>(tmix_std) / benchmark;
    for (const auto& [e, t] : rec.t_mix) {
      if (e < 0.5) {
        const double bound = rec.t_rel * std::log(1.0 / (2.0 * e));
        if (static_cast<double>(t) < bound - 1.0) rec.contraction_consistent = false;
      }
    }
    ex.records[i] = std::move(rec);
  });

  RandomSummary& s = ex.summary;
  s.benchmark = static_cast<double>(k) / (2.0 * kPi * std::exp(1.0)) *
                std::pow(static_cast<double>(p), 2.0 / static_cast<double>(k));
  std::vector<double> bench_ratios;
  bench_ratios.reserve(ex.records.size());
  s.min_ratio_trel = std::numeric_limits<double>::infinity();
  s.max_ratio_trel = 0.0;
  std::size_t below = 0;
  const double tau = tau0_cached();
  for (const TrialRecord& r : ex.records) {
    bench_ratios.push_back(r.ratio_benchmark);
    s.min_ratio_trel = std::min(s.min_ratio_trel, r.ratio_trel);
    s.max_ratio_trel = std::max(s.max_ratio_trel, r.ratio_trel);
    if (r.ratio_trel < tau - 0.05) ++below;
  }
  s.fraction_ratio_below_tau0_slack = static_cast<double>(below) / static_cast<double>(cfg.trials);
  // Nearest-rank median: ceil(N/2)-th smallest.
  std::sort(bench_ratios.begin(), bench_ratios.end());
  s.median_ratio_benchmark = bench_ratios[(bench_ratios.size() - 1) / 2];
  for (double rho : cfg.rho_or_default()) {
    ShortVectorTail tail;
    tail.rho = rho;
    tail.predicted = 0.5 * std::pow(rho, -static_cast<double>(k));
    const double threshold = std::exp(1.0) / kPi * rho * rho *
                             std::pow(static_cast<double>(p), 2.0 / static_cast<double>(k));
    std::size_t hits = 0;
    for (const TrialRecord& r : ex.records)
      if (r.t_rel >= threshold) ++hits;
    tail.empirical = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    tail.std_error = std::sqrt(tail.predicted * (1.0 - tail.predicted) /
                               static_cast<double>(cfg.trials));
    s.tails.push_back(tail);
  }
  return ex;
}

AnalyzeResult run_analyze(const ExperimentConfig& cfg) {
  if (cfg.half.empty()) throw ValidationError("analyze: --half is required");
  GenSet a = GenSet::parse(cfg.p(), cfg.half);
  const WalkAnalyzer walk(a);
  AnalyzeResult res{a, {}, {}, {}};
  res.report = walk.report(cfg.eps_or_default());
  const bool small = a.p <= 100000;
  res.geometry = lattice_geometry(a, /*with_covering=*/small, cfg.mc_samples);
  MixingReport::Predicted pred;
  pred.ell = res.geometry.ell;
  pred.t_rel_prediction = static_cast<double>(a.set_size()) /
                          (4.0 * kPi * kPi * res.geometry.ell * res.geometry.ell);
  pred.tau0_t_rel = tau0_cached() * res.report.t_rel;
  res.report.predicted = pred;
  res.window = walk.window_report(0.25);
  return res;
}

std::vector<CutoffReport> run_power2(const ExperimentConfig& cfg) {
  if (cfg.p_grid.empty()) throw ValidationError("power2: no modulus given");
  std::vector<CutoffReport> reports(cfg.p_grid.size());
  parallel_for(cfg.jobs, cfg.p_grid.size(), [&](std::uint64_t i) {
    reports[i] = cutoff_check(cfg.p_grid[i], cfg.eps.empty() ? 0.25 : cfg.eps.front());
  });
  return reports;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

Json config_json(const ExperimentConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  if (!cfg.p_grid.empty())
    j["p"] = cfg.p_grid.size() == 1 ? Json(cfg.p_grid.front()) : Json(cfg.p_grid);
  if (!cfg.half.empty()) j["half"] = cfg.half;
  if (cfg.command == "random") {
    j["k"] = cfg.k_rule.empty() ? Json(cfg.k) : Json(cfg.k_rule);
    j["trials"] = cfg.trials;
  }
  if (cfg.command == "clt") {
    j["clt_k"] = cfg.clt_k;
    j["clt_n"] = cfg.clt_n;
  }
  if (cfg.command == "theta") j["t"] = cfg.theta_t;
  if (cfg.command == "tau0" || cfg.command == "c0") j["tol"] = cfg.tol;
  j["seed"] = cfg.seed;
  j["eps"] = cfg.eps_or_default();
  if (cfg.command == "random") j["rho"] = cfg.rho_or_default();
  if (cfg.command == "theta" || cfg.command == "analyze") j["mc_samples"] = cfg.mc_samples;
  j["jobs"] = cfg.jobs;
  return j;
}

Json record_json(const TrialRecord& r) {
  Json j;
  j["trial"] = r.trial;
  j["half"] = r.half;
  j["ell"] = r.ell;
  j["gap"] = r.gap;
  j["t_rel"] = r.t_rel;
  Json tm = Json::object();
  for (const auto& [e, t] : r.t_mix) tm[format_double(e)] = t;
  j["t_mix"] = tm;
  j["diam_geom"] = r.diam_geom;
  j["ratio_t_rel"] = r.ratio_trel;
  j["ratio_benchmark"] = r.ratio_benchmark;
  j["contraction_consistent"] = r.contraction_consistent;
  return j;
}

std::string csv_random(const RandomExperiment& ex, const ExperimentConfig& cfg) {
  std::string out = "trial,half,ell,gap,t_rel";
  const std::vector<double> eps = [&] {
    std::vector<double> v{std::exp(-1.0)};
    for (double e : cfg.eps_or_default())
      if (std::abs(e - v.front()) >= 1e-15) v.push_back(e);
    return v;
  }();
  for (double e : eps) out += ",t_mix_" + format_double(e);
  out += ",diam_geom,ratio_t_rel,ratio_benchmark\n";
  for (const TrialRecord& r : ex.records) {
    out += std::to_string(r.trial) + ",";
    std::string h;
    for (std::size_t i = 0; i < r.half.size(); ++i)
      h += (i ? "|" : "") + std::to_string(r.half[i]);
    out += h + "," + format_double(r.ell) + "," + format_double(r.gap) + "," +
           format_double(r.t_rel);
    for (const auto& [e, t] : r.t_mix) {
      (void)e;
      out += "," + std::to_string(t);
    }
    out += "," + format_double(r.diam_geom) + "," + format_double(r.ratio_trel) + "," +
           format_double(r.ratio_benchmark) + "\n";
  }
  return out;
}

}  // namespace

std::string render_random(const ExperimentConfig& cfg, const RandomExperiment& ex) {
  if (cfg.format == "csv") return csv_random(ex, cfg);
  Json j;
  j["config"] = config_json(cfg);
  Json records = Json::array();
  for (const TrialRecord& r : ex.records) records.push_back(record_json(r));
  j["records"] = records;
  Json s;
  s["benchmark"] = ex.summary.benchmark;
  s["median_ratio_benchmark"] = ex.summary.median_ratio_benchmark;
  s["min_ratio_t_rel"] = ex.summary.min_ratio_trel;
  s["max_ratio_t_rel"] = ex.summary.max_ratio_trel;
  s["fraction_ratio_below_tau0_slack"] = ex.summary.fraction_ratio_below_tau0_slack;
  Json tails = Json::array();
  for (const ShortVectorTail& t : ex.summary.tails) {
    Json tj;
    tj["rho"] = t.rho;
    tj["empirical"] = t.empirical;
    tj["predicted"] = t.predicted;
    tj["std_error"] = t.std_error;
    tails.push_back(tj);
  }
  s["t_rel_tails"] = tails;
  j["summary"] = s;
  return j.dump(2) + "\n";
}

std::string render_analyze(const ExperimentConfig& cfg, const AnalyzeResult& res) {
  if (cfg.format == "csv") {
    std::string head = "p,half,gap,t_rel";
    std::string row = std::to_string(res.a.p) + ",";
    for (std::size_t i = 0; i < res.a.half.size(); ++i)
      row += (i ? "|" : "") + std::to_string(res.a.half[i]);
    row += "," + format_double(res.report.gap) + "," + format_double(res.report.t_rel);
    for (const auto& [e, t] : res.report.t_mix) {
      head += ",t_mix_" + format_double(e);
      row += "," + std::to_string(t);
    }
    head += ",ell,t_rel_prediction,tau0_t_rel,diam_geom,covering_radius,covering_exact,"
            "minkowski_rhs,window_t_low,window_t_high,window_width,window_normalized";
    row += "," + format_double(res.geometry.ell) + "," +
           format_double(res.report.predicted->t_rel_prediction) + "," +
           format_double(res.report.predicted->tau0_t_rel) + "," +
           format_double(res.geometry.diam_geom) + "," + format_double(res.geometry.covering) +
           "," + (res.geometry.covering_exact ? "true" : "false") + "," +
           format_double(res.geometry.minkowski_rhs) + "," + std::to_string(res.window.t_low) +
           "," + std::to_string(res.window.t_high) + "," + std::to_string(res.window.width) +
           "," + format_double(res.window.normalized_width);
    return head + "\n" + row + "\n";
  }
  Json j;
  j["config"] = config_json(cfg);
  Json r;
  r["p"] = res.a.p;
  r["half"] = res.a.half;
  r["gap"] = res.report.gap;
  r["t_rel"] = res.report.t_rel;
  Json tm = Json::object();
  for (const auto& [e, t] : res.report.t_mix) tm[format_double(e)] = t;
  r["t_mix"] = tm;
  Json tv = Json::array();
  for (const auto& [n, d] : res.report.tv_profile) tv.push_back(Json::array({n, d}));
  r["tv_profile"] = tv;
  if (res.report.predicted) {
    Json pred;
    pred["ell"] = res.report.predicted->ell;
    pred["t_rel_prediction"] = res.report.predicted->t_rel_prediction;
    pred["tau0_t_rel"] = res.report.predicted->tau0_t_rel;
    r["predicted"] = pred;
  }
  Json g;
  g["ell"] = res.geometry.ell;
  g["shortest_dual"] = res.geometry.shortest;
  g["diam_geom"] = res.geometry.diam_geom;
  if (res.geometry.covering > 0.0) {
    g["covering_radius"] = res.geometry.covering;
    g["covering_exact"] = res.geometry.covering_exact;
  }
  g["minkowski_rhs"] = res.geometry.minkowski_rhs;
  r["lattice"] = g;
  Json w;
  w["t_low"] = res.window.t_low;
  w["t_high"] = res.window.t_high;
  w["width"] = res.window.width;
  w["normalized_width"] = res.window.normalized_width;
  r["window"] = w;
  j["records"] = Json::array({r});
  j["summary"] = Json::object();
  return j.dump(2) + "\n";
}

std::string render_power2(const ExperimentConfig& cfg, const std::vector<CutoffReport>& reports) {
  if (cfg.format == "csv") {
    std::string out =
        "p,ell,predicted,t_mix,t_mix_low,t_mix_high,ratio_to_predicted,window_ratio,beta,"
        "tail_bound,bp_size,diag_normalized_mean,diag_correlation_ratio\n";
    for (const CutoffReport& r : reports) {
      out += std::to_string(r.p) + "," + std::to_string(r.ell) + "," + format_double(r.predicted) +
             "," + std::to_string(r.t_mix) + "," + std::to_string(r.t_mix_low) + "," +
             std::to_string(r.t_mix_high) + "," + format_double(r.ratio_to_predicted) + "," +
             format_double(r.window_ratio) + "," + format_double(r.beta) + "," +
             format_double(r.tail_bound) + "," + std::to_string(r.bp_size) + "," +
             format_double(r.diag_normalized_mean) + "," +
             format_double(r.diag_correlation_ratio) + "\n";
    }
    return out;
  }
  Json j;
  j["config"] = config_json(cfg);
  Json records = Json::array();
  for (const CutoffReport& r : reports) {
    Json rj;
    rj["p"] = r.p;
    rj["ell"] = r.ell;
    rj["predicted"] = r.predicted;
    rj["t_mix"] = r.t_mix;
    rj["t_mix_low"] = r.t_mix_low;
    rj["t_mix_high"] = r.t_mix_high;
    rj["ratio_to_predicted"] = r.ratio_to_predicted;
    rj["window_ratio"] = r.window_ratio;
    rj["beta"] = r.beta;
    rj["tail_bound"] = r.tail_bound;
    rj["bp_size"] = r.bp_size;
    rj["diag_normalized_mean"] = r.diag_normalized_mean;
    rj["diag_correlation_ratio"] = r.diag_correlation_ratio;
    records.push_back(rj);
  }
  j["records"] = records;
  j["summary"] = Json::object();
  return j.dump(2) + "\n";
}

std::string render_scalar(const ExperimentConfig& cfg, const std::string& name, double value) {
  Json j;
  j["config"] = config_json(cfg);
  Json rec;
  rec[name] = value;
  j["records"] = Json::array({rec});
  j["summary"] = Json::object();
  return j.dump(2) + "\n";
}

std::string render_theta(const ExperimentConfig& cfg, double estimate, double std_error,
                         double projection_tv) {
  if (cfg.format == "csv") {
    return "t,tv_estimate,tv_std_error,projection_tv\n" + format_double(cfg.theta_t) + "," +
           format_double(estimate) + "," + format_double(std_error) + "," +
           format_double(projection_tv) + "\n";
  }
  Json j;
  j["config"] = config_json(cfg);
  Json rec;
  rec["t"] = cfg.theta_t;
  rec["tv_estimate"] = estimate;
  rec["tv_std_error"] = std_error;
  rec["projection_tv"] = projection_tv;
  j["records"] = Json::array({rec});
  j["summary"] = Json::object();
  return j.dump(2) + "\n";
}

}  // namespace cyclemix

// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Exits with the number of failed criteria, so the ctest entry goes
// red if any criterion does.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "cyclemix/cyclic_walk.hpp"
#include "cyclemix/experiments.hpp"
#include "cyclemix/lattice.hpp"
#include "cyclemix/local_clt.hpp"
#include "cyclemix/power2.hpp"
#include "cyclemix/theta.hpp"
#include "oracles.hpp"

using namespace cyclemix;

namespace {

constexpr double kPi = 3.14159265358979323846;
int failures = 0;

struct Criterion {
  std::string detail;
  bool pass = true;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail += (detail.empty() ? "" : "; ") + what + (ok ? " [ok]" : " [FAILED]");
  }
};

void report(int number, const std::string& name, const Criterion& c, double seconds) {
  std::printf("%s criterion %d: %s (%.1fs) -- %s\n", c.pass ? "PASS" : "FAIL", number,
              name.c_str(), seconds, c.detail.c_str());
  std::fflush(stdout);
  if (!c.pass) ++failures;
}

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

char buf[256];

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

void criterion_1_constants() {
  const double t0 = now_seconds();
  Criterion c;
  const double tau = tau0(1e-10);
  c.require(std::abs(tau - 0.56161265) <= 5e-8, fmt("tau0 = %.10f vs 0.56161265 +- 5e-8", tau));
  const double c0v = c0(1e-12);
  c.require(std::abs(c0v - 3.394649802) <= 5e-9, fmt("c0 = %.10f vs 3.394649802 +- 5e-9", c0v));
  const KlMax m = kl_max();
  c.require(std::abs(m.s_star - 1.260816271) <= 1e-8, fmt("s* = %.10f vs 1.260816271 +- 1e-8", m.s_star));
  c.require(m.value >= 0.324908240 && m.value < 0.324908241,
            fmt("max F(s)/s^2 = %.12f in [0.324908240, 0.324908241)", m.value));
  report(1, "constants tau0 / c0 / sphere-packing max", c, now_seconds() - t0);
}

void criterion_2_oracle() {
  const double t0 = now_seconds();
  Criterion c;
  SplitRng rng(20240501);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    std::uint64_t p;
    do { p = next_prime(11 + rng.next_below(1990)); } while (p > 2003);
    const std::size_t k = 1 + rng.next_below(5);
    const GenSet a = sample_genset(p, k, rng);
    const std::uint64_t n = 1 + rng.next_below(1000);
    const std::vector<double> want = oracle::convolution_power(a, n);
    const CyclicMeasure got = distribution_at(a, n);
    for (std::uint64_t x = 0; x < p; ++x)
      worst = std::max(worst, std::abs(got.weights[x] - want[x]));
  }
  c.require(worst <= 1e-10, fmt("50 cases, max |transform - naive convolution| = %.3g", worst));
  report(2, "transform vs convolution oracle", c, now_seconds() - t0);
}

void spectral_ensemble(std::uint64_t seed,
                       const std::function<void(std::uint64_t, std::size_t, const GenSet&)>& fn) {
  SplitRng rng(seed);
  for (int rep = 0; rep < 100; ++rep) {
    const std::uint64_t p = rep % 2 ? 10007 : 100003;
    const std::size_t k = 1 + rng.next_below(5);
    fn(p, k, sample_genset(p, k, rng));
  }
}

void criterion_3_spectral_identity() {
  const double t0 = now_seconds();
  Criterion c;
  double worst = 0.0;
  int violations = 0;
  spectral_ensemble(7001, [&](std::uint64_t, std::size_t k, const GenSet& a) {
    const double t_rel = relaxation_time(spectral_gap(fourier_profile(a)));
    const double ell = shortest_dual(lattice_of(a)).norm;
    const double q = t_rel * 4.0 * kPi * kPi * ell * ell / static_cast<double>(2 * k + 1);
    worst = std::max(worst, std::abs(q - 1.0));
    if (std::abs(q - 1.0) > 1e-3) ++violations;
  });
  c.require(violations == 0,
            fmt("100 trials, max |t_rel 4pi^2 ell^2/(2k+1) - 1| = %.3g, violations of 1e-3: %.0f",
                worst, static_cast<double>(violations)));
  report(3, "spectral identity at 1e-3", c, now_seconds() - t0);
}

void criterion_4_lower_bounds() {
  const double t0 = now_seconds();
  Criterion c;
  const double tau = tau0_cached();
  double min_ratio = 1e300, min_trel_ratio = 1e300;
  spectral_ensemble(7002, [&](std::uint64_t p, std::size_t k, const GenSet& a) {
    const WalkAnalyzer w(a);
    const double t_rel = w.relaxation();
    const double ratio = static_cast<double>(w.mixing_time(std::exp(-1.0))) / t_rel;
    min_ratio = std::min(min_ratio, ratio);
    const double dk = static_cast<double>(k);
    const double floor = 0.9 * static_cast<double>(2 * k + 1) /
                         (16.0 * kPi * std::pow(std::tgamma(dk / 2.0 + 1.0), 2.0 / dk)) *
                         std::pow(static_cast<double>(p), 2.0 / dk);
    min_trel_ratio = std::min(min_trel_ratio, t_rel / floor);
  });
  c.require(min_ratio >= tau - 0.05, fmt("min t_mix/t_rel = %.4f >= tau0 - 0.05 = %.4f", min_ratio, tau - 0.05));
  c.require(min_trel_ratio >= 1.0,
            fmt("min t_rel / (0.9 (2k+1) p^{2/k} / (16 pi Gamma^{2/k})) = %.3f >= 1", min_trel_ratio));
  report(4, "spectral lower bounds over the random ensemble", c, now_seconds() - t0);
}

void criterion_5_typical_mixing() {
  const double t0 = now_seconds();
  Criterion c;
  ExperimentConfig cfg;
  cfg.command = "random";
  cfg.p_grid = {1000003};
  cfg.k = 3;
  cfg.trials = 200;
  cfg.seed = 20240505;
  cfg.jobs = 1;
  const RandomExperiment ex = run_random(cfg);
  const double median = ex.summary.median_ratio_benchmark;
  c.require(std::abs(median - 1.0) <= 0.3,
            fmt("median t_mix / ((k/2 pi e) p^{2/k}) = %.4f (target within 30%% of 1, benchmark %.1f)",
                median, ex.summary.benchmark));
  report(5, "typical mixing time at p = 10^6 + 3, k = 3", c, now_seconds() - t0);
}

void criterion_6_short_vector_tail() {
  const double t0 = now_seconds();
  Criterion c;
  const std::uint64_t p = 499;
  const std::size_t k = 3;
  const double rho = 2.0;
  const double rk = std::pow(std::tgamma(2.5) / std::pow(kPi, 1.5), 1.0 / 3.0);
  const double threshold = rk / (rho * std::pow(static_cast<double>(p), 1.0 / 3.0));
  SplitRng rng(20240506);
  const int draws = 20000;
  int hits = 0;
  for (int i = 0; i < draws; ++i) {
    const IndexPLattice l = sample_lattice(p, k, rng, LatticeEnsemble::kNonDegenerate);
    if (shortest_dual(l).norm <= threshold) ++hits;
  }
  const double empirical = static_cast<double>(hits) / draws;
  const double predicted = 1.0 / 16.0;
  const double sigma = std::sqrt(predicted * (1.0 - predicted) / draws);
  c.require(std::abs(empirical - predicted) <= 3.0 * sigma,
            fmt("P[ell <= R_k/(rho p^{1/3})] = %.5f vs 1/16 = 0.0625 +- %.5f (3 sigma)", empirical,
                3.0 * sigma));
  report(6, "shortest-vector tail at p=499, k=3, rho=2", c, now_seconds() - t0);
}

void criterion_7_power2_cutoff() {
  const double t0 = now_seconds();
  Criterion c;
  const std::vector<std::uint64_t> grid{1031, 4099, 16411, 65539};
  double prev_window = 1e300;
  bool monotone = true;
  double final_window = 0.0;
  for (std::uint64_t p : grid) {
    const CutoffReport r = cutoff_check(p, 0.25);
    c.require(r.ratio_to_predicted >= 0.5 && r.ratio_to_predicted <= 1.5,
              fmt("p=%.0f: t_mix/predicted = %.3f in [0.5, 1.5]", static_cast<double>(p),
                  r.ratio_to_predicted));
    if (r.window_ratio > prev_window + 1e-12) monotone = false;
    prev_window = r.window_ratio;
    final_window = r.window_ratio;
    std::printf("   power2 p=%llu: t_mix=%llu pred=%.3f window_ratio=%.4f diag_mean=%.3f\n",
                static_cast<unsigned long long>(p), static_cast<unsigned long long>(r.t_mix),
                r.predicted, r.window_ratio, r.diag_normalized_mean);
  }
  c.require(monotone, "window ratio t_mix(0.25)/t_mix(0.75) non-increasing across sizes");
  c.require(final_window <= 1.5, fmt("final window ratio = %.4f <= 1.5", final_window));
  report(7, "power-of-2 cut-off trend", c, now_seconds() - t0);
}

void criterion_8_local_clt() {
  const double t0 = now_seconds();
  Criterion c;
  double prev = 2.0;
  bool decreasing = true;
  double last = 0.0;
  std::string values;
  for (std::uint64_t n : {16ULL, 64ULL, 256ULL, 1024ULL, 2500ULL}) {
    const double v = clt_tv(1, n);
    if (v >= prev) decreasing = false;
    prev = v;
    last = v;
    values += fmt(" %.4f", v);
  }
  c.require(decreasing, "clt_tv(1, n) strictly decreasing over {16,64,256,1024,2500}:" + values);
  c.require(last <= 0.02, fmt("clt_tv(1, 2500) = %.5f <= 0.02", last));
  const double v2 = clt_tv(2, 256);
  c.require(v2 <= 0.05, fmt("clt_tv(2, 256) = %.5f <= 0.05", v2));
  report(8, "local CLT decay", c, now_seconds() - t0);
}

void criterion_9_property_suites() {
  const double t0 = now_seconds();
  Criterion c;
  SplitRng rng(20240509);

  // Parseval + sandwich + monotone TV + dilation invariance on random walks.
  bool parseval = true, sandwich = true, monotone = true, dilation = true;
  for (int rep = 0; rep < 10; ++rep) {
    const std::uint64_t p = next_prime(211 + rng.next_below(1200));
    const GenSet a = sample_genset(p, 1 + rng.next_below(4), rng);
    const WalkAnalyzer w(a);
    double prev_tv = 1.0;
    for (std::uint64_t n : {1ULL, 2ULL, 4ULL, 8ULL, 16ULL, 32ULL}) {
      const CyclicMeasure m = w.distribution(n);
      double lhs = 0.0;
      for (double v : m.weights) lhs += v * v;
      double rhs = 0.0;
      for (std::uint64_t xi = 0; xi < p; ++xi) {
        const double cc = std::abs(w.profile().coeff[xi]);
        if (cc > 0.0) rhs += std::exp(2.0 * static_cast<double>(n) * std::log(cc));
      }
      rhs /= static_cast<double>(p);
      if (std::abs(lhs - rhs) > 1e-9 * std::max(lhs, rhs)) parseval = false;
      const double tv = w.tv_at(n);
      if (tv < w.tv_lower_bound(n) - 1e-12 || tv > w.l2_at(n) + 1e-12) sandwich = false;
      if (tv > prev_tv + 1e-12) monotone = false;
      prev_tv = tv;
    }
    const GenSet b = a.dilated(2 + rng.next_below(p - 3));
    const WalkAnalyzer wb(b);
    if (std::abs(w.gap() - wb.gap()) > 1e-11) dilation = false;
    if (w.mixing_time(0.3) != wb.mixing_time(0.3)) dilation = false;
  }
  c.require(parseval, "Parseval");
  c.require(sandwich, "TV within [spectral lower bound, L2]");
  c.require(monotone, "TV non-increasing in n");
  c.require(dilation, "dilation invariance");

  // Poisson summation (lattice theta, both forms).
  bool poisson = true;
  {
    const IndexPLattice l = IndexPLattice::create(101, {1, 12});
    for (int rep = 0; rep < 20; ++rep) {
      const std::vector<double> x{rng.next_double() * 101.0, rng.next_double()};
      if (std::abs(theta_lattice(l, x, 10.1, 1e-9) - theta_lattice_spatial(l, x, 10.1, 1e-9)) >
          2e-9)
        poisson = false;
    }
  }
  c.require(poisson, "Poisson summation");

  // Transference: equality at k=1, inequality at exact k=2 Voronoi data.
  bool transference = true;
  {
    const IndexPLattice line = IndexPLattice::create(10007, {1});
    const double product = covering_radius(line).value * shortest_dual(line).norm;
    if (std::abs(product - 0.5) > 1e-9) transference = false;
    for (int rep = 0; rep < 40; ++rep) {
      const IndexPLattice l = sample_lattice(499, 2, rng, LatticeEnsemble::kNonDegenerate);
      if (covering_radius(l).value * shortest_dual(l).norm < 0.5 - 1e-9) transference = false;
    }
  }
  c.require(transference, "transference (k=1 equality, k=2 inequality)");

  // Minkowski bound over sampled lattices.
  bool minkowski = true;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t k = 1 + rng.next_below(4);
    const IndexPLattice l = sample_lattice(499, k, rng, LatticeEnsemble::kNonDegenerate);
    if (shortest_dual(l).norm > minkowski_bound(499, k) + 1e-12) minkowski = false;
  }
  c.require(minkowski, "Minkowski bound");

  // Roundtrip through the lattice correspondence.
  bool roundtrip = true;
  for (int rep = 0; rep < 300; ++rep) {
    const GenSet a = sample_genset(211, 1 + rng.next_below(4), rng);
    const IndexPLattice l = lattice_of(a);
    if (lattice_of(genset_of(l)).a != l.a) roundtrip = false;
  }
  c.require(roundtrip, "genset <-> lattice roundtrip");

  // Correlation ratio >= 1 on random symmetric frequency sets.
  bool correlation = true;
  {
    const SpectralProfile prof = fourier_profile(GenSet::create(101, {1, 10}));
    for (int rep = 0; rep < 50; ++rep) {
      std::set<std::uint64_t> b;
      for (int i = 0; i < 3; ++i) {
        const std::uint64_t xi = 1 + rng.next_below(100);
        b.insert(xi);
        b.insert(101 - xi);
      }
      const ChebyshevDiagnostic d =
          chebyshev_diagnostic(prof, {b.begin(), b.end()}, 1 + rng.next_below(8));
      if (d.correlation_ratio < 1.0 - 1e-12) correlation = false;
    }
  }
  c.require(correlation, "correlation ratio >= 1");

  // Alternating-expansion uniqueness for p <= 1009.
  bool unique = true;
  for (std::uint64_t p : {241ULL, 509ULL, 1009ULL}) {
    std::set<std::pair<int, std::vector<std::uint32_t>>> seen;
    const unsigned depth = power2_ell(p) + 2;
    for (std::uint64_t xi = 1; xi < p; ++xi)
      if (!seen.emplace(alt_binary_expansion(xi, p, depth).sign,
                        alt_binary_expansion(xi, p, depth).indices)
               .second)
        unique = false;
  }
  c.require(unique, "alternating expansion uniqueness");

  report(9, "property suites", c, now_seconds() - t0);
}

}  // namespace

int main() {
  std::printf("cyclemix acceptance suite\n");
  const double t0 = now_seconds();
  criterion_1_constants();
  criterion_2_oracle();
  criterion_3_spectral_identity();
  criterion_4_lower_bounds();
  criterion_5_typical_mixing();
  criterion_6_short_vector_tail();
  criterion_7_power2_cutoff();
  criterion_8_local_clt();
  criterion_9_property_suites();
  std::printf("%d of 9 criteria failed (%.1fs total)\n", failures, now_seconds() - t0);
  return failures;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cyclemix/cyclic_walk.hpp"
#include "cyclemix/lattice.hpp"
#include "cyclemix/rng.hpp"
#include "cyclemix/transform.hpp"
#include "oracles.hpp"

using namespace cyclemix;

namespace {
// Closed-form eigenvalues of the 3-element walk on Z/5Z, frozen from
// (1 + 2 cos(2 pi j / 5)) / 3.
constexpr double kP5Coeff1 = 0.53934466291663161;
constexpr double kP5Coeff2 = -0.20601132958329828;

GenSet p5_single() { return GenSet::create(5, {1}); }
GenSet p5_full() { return GenSet::create(5, {1, 2}); }
}  // namespace

TEST_CASE("chirp transform matches the quadratic oracle") {
  SplitRng rng(99);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 31ULL, 101ULL, 257ULL, 1009ULL, 2003ULL}) {
    const std::size_t half = static_cast<std::size_t>((p - 1) / 2) + 1;
    std::vector<double> c(half);
    for (double& v : c) v = 2.0 * rng.next_double() - 1.0;
    ChirpZ chirp(half, half, p);
    std::vector<std::complex<double>> got(half);
    chirp.run(c, got);
    const auto want = oracle::naive_chirp(c, half, p);
    for (std::size_t x = 0; x < half; ++x) {
      CAPTURE(p);
      CHECK(std::abs(got[x] - want[x]) < 1e-11);
    }
  }
}

TEST_CASE("genset validation rejects the documented invariant breaks") {
  CHECK_THROWS_AS(GenSet::create(4, {1}), ValidationError);      // not prime
  CHECK_THROWS_AS(GenSet::create(7, {0, 1}), ValidationError);   // zero entry
  CHECK_THROWS_AS(GenSet::create(7, {1, 1}), ValidationError);   // duplicate
  CHECK_THROWS_AS(GenSet::create(7, {1, 5}), ValidationError);   // 5 > (p-1)/2
  CHECK_THROWS_AS(GenSet::create(7, {}), ValidationError);       // empty
  CHECK_THROWS_AS(GenSet::parse(7, "1,x"), ValidationError);     // malformed
  const GenSet a = GenSet::parse(13, "5,1,3");
  CHECK(a.half == std::vector<std::uint64_t>{1, 3, 5});
  CHECK(a.set_size() == 7);
}

TEST_CASE("fourier profile: closed forms and structural invariants") {
  const SpectralProfile p1 = fourier_profile(p5_single());
  CHECK(p1.coeff[0] == 1.0);
  CHECK(p1.coeff[1] == doctest::Approx(kP5Coeff1).epsilon(1e-14));
  CHECK(p1.coeff[2] == doctest::Approx(kP5Coeff2).epsilon(1e-14));

  const SpectralProfile p2 = fourier_profile(p5_full());
  for (std::uint64_t xi = 1; xi < 5; ++xi) CHECK(std::abs(p2.coeff[xi]) < 1e-15);

  SplitRng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const std::uint64_t p = 101;
    GenSet a = sample_genset(p, 1 + rng.next_below(5), rng);
    const SpectralProfile prof = fourier_profile(a);
    CHECK(prof.coeff[0] == 1.0);
    for (std::uint64_t xi = 1; xi < p; ++xi) {
      CHECK(prof.coeff[xi] == prof.coeff[p - xi]);
      CHECK(std::abs(prof.coeff[xi]) <= 1.0);
    }
  }
}

TEST_CASE("distribution_at: point mass, one step, two steps, oracle sweep") {
  const GenSet a = p5_single();
  const CyclicMeasure d0 = distribution_at(a, 0);
  CHECK(d0.weights[0] == 1.0);

  const CyclicMeasure d1 = distribution_at(a, 1);
  for (std::uint64_t x = 0; x < 5; ++x) {
    const double expect = (x == 0 || x == 1 || x == 4) ? 1.0 / 3.0 : 0.0;
    CHECK(d1.weights[x] == doctest::Approx(expect).epsilon(1e-12));
  }

  const CyclicMeasure d2 = distribution_at(a, 2);
  const std::vector<double> expect2{3.0 / 9, 2.0 / 9, 1.0 / 9, 1.0 / 9, 2.0 / 9};
  for (std::uint64_t x = 0; x < 5; ++x)
    CHECK(d2.weights[x] == doctest::Approx(expect2[x]).epsilon(1e-12));

  SplitRng rng(17);
  for (int rep = 0; rep < 6; ++rep) {
    const std::uint64_t p = next_prime(211 + rng.next_below(1500));
    const std::size_t k = 1 + rng.next_below(5);
    const GenSet g = sample_genset(p, k, rng);
    const std::uint64_t n = 1 + rng.next_below(1000);
    const std::vector<double> want = oracle::convolution_power(g, n);
    const CyclicMeasure got = distribution_at(g, n);
    double max_err = 0.0;
    for (std::uint64_t x = 0; x < p; ++x) max_err = std::max(max_err, std::abs(got.weights[x] - want[x]));
    CAPTURE(p);
    CAPTURE(n);
    CHECK(max_err <= 1e-10);
  }
}

TEST_CASE("flush-to-uniform for astronomically large step counts") {
  const CyclicMeasure m = distribution_at(p5_single(), 1000000000000ULL);
  for (double w : m.weights) CHECK(w == 0.2);
}

TEST_CASE("distribution at the 2^20 scale: normalization, symmetry, Parseval") {
  // p just below 2^20 exercises the tightest transform padding (M = 2^20).
  const std::uint64_t p = 1048573;
  const GenSet a = GenSet::create(p, {1, 97, 5113});
  const WalkAnalyzer w(a);
  const std::uint64_t n = 2000;
  const CyclicMeasure m = w.distribution(n);
  double sum = 0.0, sum_sq = 0.0;
  for (double v : m.weights) {
    sum += v;
    sum_sq += v * v;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  for (std::uint64_t x = 1; x < 2000; ++x) CHECK(m.weights[x] == m.weights[p - x]);
  double rhs = 0.0;
  for (std::uint64_t xi = 0; xi < p; ++xi) {
    const double c = std::abs(w.profile().coeff[xi]);
    if (c > 0.0) rhs += std::exp(2.0 * static_cast<double>(n) * std::log(c));
  }
  rhs /= static_cast<double>(p);
  CHECK(sum_sq == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("tv_to_uniform: endpoints and the two-step value") {
  CHECK(tv_to_uniform(CyclicMeasure::point_mass(5)) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(tv_to_uniform(CyclicMeasure::uniform(5)) == 0.0);
  CHECK(tv_to_uniform(distribution_at(p5_single(), 2)) ==
        doctest::Approx(8.0 / 45.0).epsilon(1e-12));
}

TEST_CASE("l2_to_uniform: vanishing profile, closed form, monotone decay") {
  const SpectralProfile full = fourier_profile(p5_full());
  CHECK(l2_to_uniform(full, 1) == doctest::Approx(0.0));
  CHECK(l2_to_uniform(full, 7) == doctest::Approx(0.0));

  const SpectralProfile one = fourier_profile(p5_single());
  CHECK(l2_to_uniform(one, 1) == doctest::Approx(0.5 * std::sqrt(2.0 / 3.0)).epsilon(1e-13));
  double prev = l2_to_uniform(one, 1);
  for (std::uint64_t n = 2; n < 40; ++n) {
    const double cur = l2_to_uniform(one, n);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("spectral gap and relaxation time") {
  const SpectralProfile one = fourier_profile(p5_single());
  CHECK(spectral_gap(one) == doctest::Approx(1.0 - kP5Coeff1).epsilon(1e-14));
  CHECK(relaxation_time(spectral_gap(one)) ==
        doctest::Approx(-1.0 / std::log(kP5Coeff1)).epsilon(1e-13));

  CHECK(spectral_gap(fourier_profile(p5_full())) == doctest::Approx(1.0));
  CHECK(relaxation_time(1.0) == 0.0);

  SpectralProfile degenerate;
  degenerate.p = 3;
  degenerate.set_size = 3;
  degenerate.coeff = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(spectral_gap(degenerate), ValidationError);
  CHECK_THROWS_AS(relaxation_time(0.0), ValidationError);
}

TEST_CASE("dilation invariance: spectrum multiset, gap, TV, mixing time") {
  SplitRng rng(23);
  const std::uint64_t p = 101;
  for (int rep = 0; rep < 5; ++rep) {
    const GenSet a = sample_genset(p, 2 + rng.next_below(3), rng);
    const std::uint64_t c = 2 + rng.next_below(p - 3);
    const GenSet b = a.dilated(c);
    const WalkAnalyzer wa(a), wb(b);

    std::vector<double> ca(wa.profile().coeff), cb(wb.profile().coeff);
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    for (std::size_t i = 0; i < ca.size(); ++i) CHECK(ca[i] == doctest::Approx(cb[i]).epsilon(1e-12));

    CHECK(wa.gap() == doctest::Approx(wb.gap()).epsilon(1e-12));
    for (std::uint64_t n : {1ULL, 3ULL, 9ULL})
      CHECK(wa.tv_at(n) == doctest::Approx(wb.tv_at(n)).epsilon(1e-9));
    CHECK(wa.mixing_time(0.3) == wb.mixing_time(0.3));
  }
}

TEST_CASE("Parseval ties the distribution to the powered spectrum") {
  SplitRng rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    const std::uint64_t p = next_prime(101 + rng.next_below(900));
    const GenSet a = sample_genset(p, 1 + rng.next_below(4), rng);
    const WalkAnalyzer w(a);
    for (std::uint64_t n : {1ULL, 5ULL, 17ULL}) {
      const CyclicMeasure m = w.distribution(n);
      double lhs = 0.0;
      for (double v : m.weights) lhs += v * v;
      double rhs = 0.0;
      for (std::uint64_t xi = 0; xi < p; ++xi) {
        const double c = std::abs(w.profile().coeff[xi]);
        rhs += c > 0.0 ? std::exp(2.0 * static_cast<double>(n) * std::log(c)) : 0.0;
      }
      rhs /= static_cast<double>(p);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
}

TEST_CASE("TV is sandwiched by the spectral bounds and decreases in n") {
  SplitRng rng(37);
  for (int rep = 0; rep < 4; ++rep) {
    const std::uint64_t p = next_prime(211 + rng.next_below(500));
    const GenSet a = sample_genset(p, 1 + rng.next_below(3), rng);
    const WalkAnalyzer w(a);
    double prev = 1.0;
    for (std::uint64_t n = 1; n <= 64; n *= 2) {
      const double tv = w.tv_at(n);
      CHECK(tv <= prev + 1e-12);
      CHECK(tv >= w.tv_lower_bound(n) - 1e-12);
      CHECK(tv <= w.l2_at(n) + 1e-12);
      prev = tv;
    }
  }
}

TEST_CASE("mixing_time: degenerate epsilon, p=5 cases, least-n property") {
  const GenSet one = p5_single();
  CHECK(mixing_time(one, 0.95) == 0);  // eps >= 1 - 1/p
  CHECK(mixing_time(one, std::exp(-1.0)) == 2);
  CHECK(mixing_time(p5_full(), std::exp(-1.0)) == 1);
  CHECK_THROWS_AS(mixing_time(one, 0.0), ValidationError);
  CHECK_THROWS_AS(mixing_time(one, 1.0), ValidationError);

  const GenSet g = GenSet::create(211, {1, 5});
  const WalkAnalyzer w(g);
  const std::uint64_t t = w.mixing_time(0.2);
  CHECK(w.tv_at(t) <= 0.2);
  CHECK(w.tv_at(t - 1) > 0.2);
}

TEST_CASE("window report: nearest-neighbor walk has a wide window") {
  const GenSet a = GenSet::create(10007, {1});
  const WindowReport w = window_report(a, 0.1);
  CHECK(w.t_high >= w.t_low);
  CHECK(static_cast<double>(w.width) / static_cast<double>(w.t_mix) >= 0.05);

  const WindowReport degenerate = window_report(p5_full(), 0.2);
  CHECK(degenerate.width <= 1);
  CHECK_THROWS_AS(window_report(p5_full(), 0.5), ValidationError);
}

TEST_CASE("chebyshev diagnostic: powers at zero, closed form, correlation floor") {
  const SpectralProfile prof = fourier_profile(p5_single());
  const ChebyshevDiagnostic at0 = chebyshev_diagnostic(prof, {1, 4}, 0);
  CHECK(at0.normalized_mean == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(at0.correlation_ratio == doctest::Approx(1.0).epsilon(1e-14));

  const ChebyshevDiagnostic at2 = chebyshev_diagnostic(prof, {1, 4}, 2);
  CHECK(at2.normalized_mean ==
        doctest::Approx(std::sqrt(2.0) * kP5Coeff1 * kP5Coeff1).epsilon(1e-12));

  CHECK_THROWS_AS(chebyshev_diagnostic(prof, {}, 1), ValidationError);
  CHECK_THROWS_AS(chebyshev_diagnostic(prof, {0, 1, 4}, 1), ValidationError);
  CHECK_THROWS_AS(chebyshev_diagnostic(prof, {1}, 1), ValidationError);  // not symmetric

  const SpectralProfile prof101 = fourier_profile(GenSet::create(101, {1, 10}));
  SplitRng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<std::uint64_t> b;
    for (int i = 0; i < 4; ++i) {
      const std::uint64_t xi = 1 + rng.next_below(100);
      b.push_back(xi);
      b.push_back(101 - xi);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    const ChebyshevDiagnostic d = chebyshev_diagnostic(prof101, b, 5);
    CHECK(d.correlation_ratio >= 1.0 - 1e-12);
  }
}

TEST_CASE("mixing report fields are internally consistent") {
  const GenSet a = GenSet::create(1009, {1, 7, 30});
  const WalkAnalyzer w(a);
  const MixingReport r = w.report({0.5, std::exp(-1.0), 0.1});
  std::uint64_t prev_t = 0;
  double prev_eps = 1.0;
  for (const auto& [eps, t] : r.t_mix) {
    (void)eps;
    CHECK(prev_eps >= 0.0);
    prev_eps = eps;
  }
  // map is keyed ascending in eps, so t_mix must be non-increasing
  for (auto it = r.t_mix.begin(); it != r.t_mix.end(); ++it) {
    if (it != r.t_mix.begin()) CHECK(it->second <= prev_t);
    prev_t = it->second;
  }
  double prev_tv = 1.0;
  for (const auto& [n, tv] : r.tv_profile) {
    (void)n;
    CHECK(tv <= prev_tv + 1e-12);
    prev_tv = tv;
  }
}

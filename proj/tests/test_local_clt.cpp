#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cyclemix/local_clt.hpp"

using namespace cyclemix;

TEST_CASE("nu_power: point mass, two steps in 1d, symmetry, capacity") {
  const GridDistribution d0 = nu_power(2, 0);
  const std::vector<std::int64_t> origin2{0, 0};
  CHECK(d0.at(origin2) == 1.0);

  const GridDistribution d = nu_power(1, 2);
  const std::vector<std::int64_t> a0{0}, a1{1}, am1{-1}, a2{2}, am2{-2};
  CHECK(d.at(a0) == doctest::Approx(3.0 / 9.0).epsilon(1e-15));
  CHECK(d.at(a1) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(d.at(am1) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(d.at(a2) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(d.at(am2) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));

  // mass 1, no negatives, coordinate symmetry / permutation symmetry in 2d
  const GridDistribution d2 = nu_power(2, 9);
  double mass = 0.0;
  for (double v : d2.values) {
    CHECK(v >= 0.0);
    mass += v;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  for (std::int64_t x = -9; x <= 9; ++x) {
    for (std::int64_t y = -9; y <= 9; ++y) {
      const std::vector<std::int64_t> q{x, y}, qf{-x, y}, qs{y, x};
      CHECK(d2.at(q) == doctest::Approx(d2.at(qf)).epsilon(1e-13));
      CHECK(d2.at(q) == doctest::Approx(d2.at(qs)).epsilon(1e-13));
    }
  }
  // marginals agree across coordinates
  for (std::int64_t x = -9; x <= 9; ++x) {
    double mx = 0.0, my = 0.0;
    for (std::int64_t y = -9; y <= 9; ++y) {
      const std::vector<std::int64_t> q1{x, y}, q2{y, x};
      mx += d2.at(q1);
      my += d2.at(q2);
    }
    CHECK(mx == doctest::Approx(my).epsilon(1e-13));
  }

  CHECK_THROWS_AS(nu_power(3, 200), CapacityError);
  CHECK_THROWS_AS(nu_power(4, 4), ValidationError);
}

TEST_CASE("clt_tv: range, decay along a doubling schedule, quadrature stability") {
  double prev = 1.0;
  for (std::uint64_t n : {16ULL, 64ULL, 256ULL}) {
    const double v = clt_tv(1, n);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(v < prev);
    prev = v;
  }

  // Halving the per-cell quadrature order moves the value by < 1e-6.
  const GridDistribution d = nu_power(1, 64);
  CHECK(std::abs(clt_tv(d, 5) - clt_tv(d, 2)) < 1e-6);

  const GridDistribution d2 = nu_power(2, 64);
  CHECK(std::abs(clt_tv(d2, 5) - clt_tv(d2, 2)) < 1e-6);

  // k=2 decay
  CHECK(clt_tv(2, 64) < clt_tv(2, 16));
}

TEST_CASE("pointwise ratio: symmetry, range flag, two-size contraction") {
  const GridDistribution d = nu_power(1, 1000);
  const std::vector<std::int64_t> a0{0}, ap{7}, am{-7};
  CHECK(pointwise_ratio(d, ap).ratio == doctest::Approx(pointwise_ratio(d, am).ratio));
  CHECK(pointwise_ratio(d, a0).in_range);

  // far outside the Gaussian bulk the flag drops but the value is computed
  const std::vector<std::int64_t> far{400};
  const PointwiseRatio pr = pointwise_ratio(d, far);
  CHECK_FALSE(pr.in_range);
  CHECK(std::isfinite(pr.ratio));

  // max |ratio - 1| over |alpha| <= sigma contracts from n=1e3 to n=1e4
  const auto max_dev = [](const GridDistribution& dist) {
    const double sigma = std::sqrt(2.0 * static_cast<double>(dist.n) / 3.0);
    double worst = 0.0;
    for (std::int64_t a = 0; a <= static_cast<std::int64_t>(sigma); ++a) {
      const std::vector<std::int64_t> alpha{a};
      worst = std::max(worst, std::abs(pointwise_ratio(dist, alpha).ratio - 1.0));
    }
    return worst;
  };
  const double dev3 = max_dev(d);
  const GridDistribution d4 = nu_power(1, 10000);
  const double dev4 = max_dev(d4);
  MESSAGE("max |ratio-1|: n=1e3 -> ", dev3, ", n=1e4 -> ", dev4);
  CHECK(dev4 < dev3);
  const std::vector<std::int64_t> z{0};
  CHECK(pointwise_ratio(d4, z).ratio == doctest::Approx(1.0).epsilon(0.01));
}

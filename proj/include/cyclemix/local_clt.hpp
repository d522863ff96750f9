// Numerical verification of the lattice local limit theorem: exact convolution
// powers of the uniform measure on {0, +-e_i} in Z^k, total variation against
// the matched Gaussian after cube smoothing, and pointwise density ratios.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cyclemix/util.hpp"

namespace cyclemix {

// Dense distribution on the box [-n, n]^k (k <= 3, (2n+1)^k <= 1e7 cells).
struct GridDistribution {
  std::size_t k = 0;
  std::uint64_t n = 0;
  std::vector<double> values;

  std::int64_t side() const { return 2 * static_cast<std::int64_t>(n) + 1; }
  double at(std::span<const std::int64_t> alpha) const;
};

GridDistribution nu_power(std::size_t k, std::uint64_t n);

// TV between the n-step distribution convolved with the unit-cube indicator
// and the Gaussian of matched variance 2n/(2k+1) per coordinate. Cell
// integrals are exact (erf products) where the integrand has one sign and
// adaptive tensor Gauss-Legendre of the given order across the kink shell.
double clt_tv(std::size_t k, std::uint64_t n, int quad_order = 5);
double clt_tv(const GridDistribution& dist, int quad_order = 5);

struct PointwiseRatio {
  double ratio = 0.0;
  bool in_range = false;  // inside the validity region of the local limit law
};

PointwiseRatio pointwise_ratio(std::uint64_t n, std::span<const std::int64_t> alpha);
PointwiseRatio pointwise_ratio(const GridDistribution& dist, std::span<const std::int64_t> alpha);

}  // namespace cyclemix

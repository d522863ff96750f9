#include "cyclemix/local_clt.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cyclemix {

namespace {

constexpr std::uint64_t kCellCap = 10000000;  // capacity cap on (2n+1)^k

std::uint64_t box_cells(std::size_t k, std::uint64_t n) {
  const std::uint64_t side = 2 * n + 1;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > kCellCap / side) return kCellCap + 1;
    total *= side;
  }
  return total;
}

// Gauss-Legendre nodes/weights on [-1/2, 1/2] for small fixed orders.
struct GaussRule {
  std::vector<double> node, weight;
};

GaussRule gauss_rule(int order) {
  static const std::array<std::vector<double>, 6> kNodes = {{
      {},
      {0.0},
      {-0.28867513459481287, 0.28867513459481287},
      {-0.3872983346207417, 0.0, 0.3872983346207417},
      {-0.43056815579702629, -0.16999052179242813, 0.16999052179242813, 0.43056815579702629},
      {-0.45308992296933198, -0.26923465505284155, 0.0, 0.26923465505284155, 0.45308992296933198},
  }};
  static const std::array<std::vector<double>, 6> kWeights = {{
      {},
      {1.0},
      {0.5, 0.5},
      {0.2777777777777778, 0.4444444444444444, 0.2777777777777778},
      {0.17392742256872692, 0.32607257743127305, 0.32607257743127305, 0.17392742256872692},
      {0.11846344252809454, 0.23931433524968324, 0.28444444444444444, 0.23931433524968324,
       0.11846344252809454},
  }};
  if (order < 1 || order > 5) throw ValidationError("clt_tv: quadrature order must lie in [1, 5]");
  return {kNodes[order], kWeights[order]};
}

double erf_mass(double lo, double hi, double sigma) {
  const double s = sigma * std::sqrt(2.0);
  return 0.5 * (std::erf(hi / s) - std::erf(lo / s));
}

}  // namespace

double GridDistribution::at(std::span<const std::int64_t> alpha) const {
  if (alpha.size() != k) throw ValidationError("GridDistribution: dimension mismatch");
  const std::int64_t s = side();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::int64_t c = alpha[i] + static_cast<std::int64_t>(n);
    if (c < 0 || c >= s) return 0.0;
    idx = idx * static_cast<std::size_t>(s) + static_cast<std::size_t>(c);
  }
  return values[idx];
}

GridDistribution nu_power(std::size_t k, std::uint64_t n) {
  if (k < 1 || k > 3) throw ValidationError("nu_power: dimension must lie in [1, 3]");
  const std::uint64_t cells = box_cells(k, n);
  if (cells > kCellCap)
    throw CapacityError("nu_power: (2n+1)^k exceeds the 1e7 cell cap");
  GridDistribution d;
  d.k = k;
  d.n = n;
  d.values.assign(cells, 0.0);
  const auto s = static_cast<std::size_t>(d.side());
  const std::size_t center = k == 1 ? n : (k == 2 ? n * s + n : (n * s + n) * s + n);
  d.values[center] = 1.0;
  if (n == 0) return d;

  std::vector<double> next(cells);
  const double w = 1.0 / static_cast<double>(2 * k + 1);
  for (std::uint64_t step = 0; step < n; ++step) {
    std::vector<double>& cur = d.values;
    if (k == 1) {
      for (std::size_t i = 0; i < s; ++i) {
        double v = cur[i];
        if (i > 0) v += cur[i - 1];
        if (i + 1 < s) v += cur[i + 1];
        next[i] = v * w;
      }
    } else if (k == 2) {
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
          const std::size_t idx = i * s + j;
          double v = cur[idx];
          if (i > 0) v += cur[idx - s];
          if (i + 1 < s) v += cur[idx + s];
          if (j > 0) v += cur[idx - 1];
          if (j + 1 < s) v += cur[idx + 1];
          next[idx] = v * w;
        }
      }
    } else {
      const std::size_t ss = s * s;
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
          for (std::size_t l = 0; l < s; ++l) {
            const std::size_t idx = (i * s + j) * s + l;
            double v = cur[idx];
            if (i > 0) v += cur[idx - ss];
            if (i + 1 < s) v += cur[idx + ss];
            if (j > 0) v += cur[idx - s];
            if (j + 1 < s) v += cur[idx + s];
            if (l > 0) v += cur[idx - 1];
            if (l + 1 < s) v += cur[idx + 1];
            next[idx] = v * w;
          }
        }
      }
    }
    cur.swap(next);
  }
  return d;
}

namespace {

// Cell integral of |q - eta(x)| over a box. In the Gaussian bulk nearly every
// cell straddles the kink surface eta = q, so blind subdivision explodes;
// instead the innermost axis is integrated exactly (the Gaussian factors, and
// the 1-d crossing point has a closed form), leaving a smooth integrand for
// the adaptive tensor rule over the outer axes.
struct CellIntegrator {
  double sigma = 0.0;
  std::size_t k = 0;
  GaussRule rule;
  double g0 = 0.0;  // peak of the 1-d factor

  double factor(double x) const {
    return g0 * std::exp(-x * x / (2.0 * sigma * sigma));
  }

  // Exact integral over [a, b] of |scale * g(x) - q| for the 1-d Gaussian
  // factor g: split at the crossing points +-xs and use erf on each piece.
  double seg_abs(double q, double scale, double a, double b) const {
    const auto piece = [&](double lo, double hi) {
      return scale * erf_mass(lo, hi, sigma) - q * (hi - lo);
    };
    if (q <= 0.0) return piece(a, b);
    if (q >= scale * g0) return -piece(a, b);
    const double xs = sigma * std::sqrt(2.0 * std::log(scale * g0 / q));
    const double c1 = std::clamp(-xs, a, b);
    const double c2 = std::clamp(xs, a, b);
    return std::abs(piece(a, c1)) + std::abs(piece(c1, c2)) + std::abs(piece(c2, b));
  }

  // Adaptive Gauss over axis `dim`; the last axis is handled exactly.
  double outer(double q, double scale, std::span<const double> lo, std::span<const double> hi,
               std::size_t dim, double tol, int depth) const {
    if (dim + 1 == k) return seg_abs(q, scale, lo[dim], hi[dim]);
    const auto f = [&](double u) {
      return outer(q, scale * factor(u), lo, hi, dim + 1, tol, depth);
    };
    return adaptive_axis(f, lo[dim], hi[dim], tol, depth);
  }

  template <class F>
  double gauss(const F& f, double a, double b) const {
    const double mid = 0.5 * (a + b), width = b - a;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.node.size(); ++i)
      s += rule.weight[i] * f(mid + width * rule.node[i]);
    return s * width;
  }

  template <class F>
  double adaptive_axis(const F& f, double a, double b, double tol, int depth) const {
    const double whole = gauss(f, a, b);
    const double mid = 0.5 * (a + b);
    const double split = gauss(f, a, mid) + gauss(f, mid, b);
    if (depth <= 0 || std::abs(split - whole) <= tol) return split;
    return adaptive_axis(f, a, mid, tol / 2.0, depth - 1) +
           adaptive_axis(f, mid, b, tol / 2.0, depth - 1);
  }

  double mass(std::span<const double> lo, std::span<const double> hi) const {
    double m = 1.0;
    for (std::size_t i = 0; i < k; ++i) m *= erf_mass(lo[i], hi[i], sigma);
    return m;
  }

  double gaussian(double r_sq) const {
    return std::pow(g0, static_cast<double>(k)) * std::exp(-r_sq / (2.0 * sigma * sigma));
  }

  double integrate(double q, std::span<const double> lo, std::span<const double> hi) const {
    // Radial monotonicity gives the exact integrand range over the box.
    double near_sq = 0.0, far_sq = 0.0;
    double vol = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double a = lo[i], b = hi[i];
      const double nearest = (a <= 0.0 && 0.0 <= b) ? 0.0 : std::min(std::abs(a), std::abs(b));
      const double farthest = std::max(std::abs(a), std::abs(b));
      near_sq += nearest * nearest;
      far_sq += farthest * farthest;
      vol *= b - a;
    }
    if (q >= gaussian(near_sq)) return q * vol - mass(lo, hi);
    if (q <= gaussian(far_sq)) return mass(lo, hi) - q * vol;
    if (k == 1) return seg_abs(q, 1.0, lo[0], hi[0]);
    // Per-cell error budget proportional to the cell's share of total mass.
    const double tol = 5e-9 * (mass(lo, hi) + q * vol);
    return outer(q, 1.0, lo, hi, 0, std::max(tol, 1e-16), 20);
  }
};

}  // namespace

double clt_tv(const GridDistribution& dist, int quad_order) {
  const std::size_t k = dist.k;
  const auto n = static_cast<std::int64_t>(dist.n);
  CellIntegrator ci;
  ci.sigma = std::sqrt(2.0 * static_cast<double>(dist.n) / static_cast<double>(2 * k + 1));
  ci.k = k;
  ci.rule = gauss_rule(quad_order);
  ci.g0 = 1.0 / std::sqrt(kTwoPi * ci.sigma * ci.sigma);

  double total = 0.0;
  std::vector<std::int64_t> alpha(k, -n);
  std::vector<double> lo(k), hi(k);
  std::size_t idx = 0;
  for (;;) {
    const double q = dist.values[idx];
    for (std::size_t i = 0; i < k; ++i) {
      lo[i] = static_cast<double>(alpha[i]) - 0.5;
      hi[i] = static_cast<double>(alpha[i]) + 0.5;
    }
    total += ci.integrate(q, lo, hi);
    // advance the multi-index (row-major, last coordinate fastest)
    std::size_t d = k;
    for (;;) {
      if (d == 0) break;
      --d;
      if (++alpha[d] <= n) break;
      alpha[d] = -n;
    }
    ++idx;
    if (idx == dist.values.size()) break;
  }
  // Gaussian mass outside the box: the smoothed walk vanishes there.
  double box_mass = 1.0;
  const double edge = static_cast<double>(n) + 0.5;
  for (std::size_t i = 0; i < k; ++i) box_mass *= erf_mass(-edge, edge, ci.sigma);
  total += 1.0 - box_mass;
  return 0.5 * total;
}

double clt_tv(std::size_t k, std::uint64_t n, int quad_order) {
  return clt_tv(nu_power(k, n), quad_order);
}

PointwiseRatio pointwise_ratio(const GridDistribution& dist, std::span<const std::int64_t> alpha) {
  const std::size_t k = dist.k;
  if (alpha.size() != k) throw ValidationError("pointwise_ratio: dimension mismatch");
  const double dn = static_cast<double>(dist.n);
  const double dk = static_cast<double>(k);
  const double sigma_sq = 2.0 * dn / static_cast<double>(2 * k + 1);
  double norm2 = 0.0, norm4 = 0.0;
  for (std::int64_t a : alpha) {
    const double x = static_cast<double>(a);
    norm2 += x * x;
    norm4 += x * x * x * x;
  }
  const double gauss = std::pow(kTwoPi * sigma_sq, -dk / 2.0) * std::exp(-norm2 / (2.0 * sigma_sq));
  PointwiseRatio r;
  r.ratio = dist.at(alpha) / gauss;
  const double log_n = std::log(std::max(2.0, dn));
  r.in_range = norm2 <= 2.0 * dk * dn / (2.0 * dk + 1.0) + dn * log_n / std::sqrt(dk) &&
               norm4 <= dn * dn / dk * (1.0 + log_n / std::sqrt(dk));
  return r;
}

PointwiseRatio pointwise_ratio(std::uint64_t n, std::span<const std::int64_t> alpha) {
  return pointwise_ratio(nu_power(alpha.size(), n), alpha);
}

}  // namespace cyclemix

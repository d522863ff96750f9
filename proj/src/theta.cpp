#include "cyclemix/theta.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace cyclemix {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTermCut = 1e-17;  // relative floor for series terms
constexpr double kLogEnvelope = 45.0;  // e^-45 ~ 3e-20 per-term envelope

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double theta_circle(double x, double t) {
  if (!(t > 0.0)) throw ValidationError("theta_circle: time must be positive");
  x -= std::floor(x);
  if (t >= 1.0 / kTwoPi) {
    // Frequency form: 1 + 2 sum_j exp(-2 pi^2 t j^2) cos(2 pi j x).
    double s = 1.0;
    for (int j = 1;; ++j) {
      const double e = std::exp(-2.0 * kPi * kPi * t * j * j);
      if (e < kTermCut) break;
      s += 2.0 * e * std::cos(kTwoPi * j * x);
    }
    return s;
  }
  // Spatial form: sum_j exp(-(x-j)^2 / 2t) / sqrt(2 pi t).
  const double r = std::sqrt(2.0 * t * kLogEnvelope) + 1.0;
  const auto lo = static_cast<long>(std::floor(x - r));
  const auto hi = static_cast<long>(std::ceil(x + r));
  double s = 0.0;
  for (long j = lo; j <= hi; ++j) {
    const double d = x - static_cast<double>(j);
    s += std::exp(-d * d / (2.0 * t));
  }
  return s / std::sqrt(kTwoPi * t);
}

double tv_circle(double t) {
  const auto f = [t](double x) { return theta_circle(x, t) - 1.0; };
  // Isolate sign changes of theta - 1 on (0, 1/2), then integrate each piece.
  constexpr int kGrid = 96;
  std::vector<double> cuts{0.0};
  double prev_x = 0.0, prev_v = f(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double x = 0.5 * static_cast<double>(i) / kGrid;
    const double v = f(x);
    if (prev_v == 0.0) {
      cuts.push_back(prev_x);
    } else if ((prev_v < 0.0) != (v < 0.0) && v != 0.0) {
      double a = prev_x, b = x, va = prev_v;
      for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b), vm = f(m);
        if ((va < 0.0) == (vm < 0.0)) { a = m; va = vm; }
        else b = m;
      }
      cuts.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_v = v;
  }
  cuts.push_back(0.5);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += std::abs(integrate(f, cuts[i], cuts[i + 1], 1e-13));
  return total;  // = (1/2) int_0^1 |theta - 1| by the x <-> 1-x symmetry
}

double tau0(double tol) {
  if (!(tol >= 1e-12)) throw ValidationError("tau0: tolerance must be >= 1e-12");
  const double target = std::exp(-1.0);
  double lo = 0.3, hi = 0.9;  // tv_circle is strictly decreasing in t
  while (hi - lo > std::min(tol, 1e-10) / 4.0) {
    const double mid = 0.5 * (lo + hi);
    if (tv_circle(mid / (2.0 * kPi * kPi)) > target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Frequency-sum theta: (1/p) sum_lambda exp(-2 pi^2 t |lambda|^2) cos(2 pi lambda.x)
struct FrequencyTheta {
  std::vector<DualVector> duals;
  double t = 0.0;
  std::uint64_t p = 0;

  double operator()(std::span<const double> x) const {
    double s = 1.0;  // lambda = 0
    for (const DualVector& d : duals) {
      double phase = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) phase += d.v[i] * x[i];
      s += std::exp(-2.0 * kPi * kPi * t * d.norm * d.norm) * std::cos(kTwoPi * phase);
    }
    return s / static_cast<double>(p);
  }
};

double freq_radius(double t) { return std::sqrt(kLogEnvelope / (2.0 * kPi * kPi * t)); }

FrequencyTheta make_frequency_theta(const IndexPLattice& l, double t, double tol) {
  // Base envelope e^-45 per term, then grow the radius until the shell-count
  // tail bound drops below tol.
  double radius = freq_radius(t);
  const double dk = static_cast<double>(l.k);
  const auto tail_bound = [&](double r) {
    double s = 0.0;
    for (int j = 0; j < 64; ++j) {
      const double r0 = r + j, r1 = r + j + 1;
      const double vol = std::pow(kPi, dk / 2.0) / std::tgamma(dk / 2.0 + 1.0) *
                         (std::pow(r1 + std::sqrt(dk), dk));
      const double shell = static_cast<double>(l.p) * vol;
      const double term = shell * std::exp(-2.0 * kPi * kPi * t * r0 * r0);
      s += term / static_cast<double>(l.p);
      if (term < tol * 1e-6) break;
    }
    return s;
  };
  while (tail_bound(radius) > 0.5 * tol) radius *= 1.2599;  // +1/3 octave in volume
  FrequencyTheta ft;
  ft.duals = dual_short_vectors(l, radius);
  ft.t = t;
  ft.p = l.p;
  return ft;
}

// Enumerates primal lattice points lambda with |x + lambda| <= radius and
// accumulates the Gaussian spatial sum.
double spatial_sum(const IndexPLattice& l, std::span<const double> x, double t, double radius) {
  const std::uint64_t p = l.p;
  const std::size_t k = l.k;
  const double radius_sq = radius * radius;
  double acc = 0.0;
  const auto pp = static_cast<__int128>(p);

  std::vector<std::int64_t> m(k > 1 ? k - 1 : 0);
  const auto last_coord = [&](double partial) {
    // lambda_1 runs over a residue class mod p (a_1 = 1 normalized) or all of
    // Z when k = 1 (then the class is 0 mod p).
    __int128 res = 0;
    for (std::size_t i = 1; i < k; ++i)
      res += static_cast<__int128>(m[i - 1]) * static_cast<std::int64_t>(l.a[i]);
    const auto r = static_cast<std::int64_t>((((-res) % pp) + pp) % pp);
    const double rem = radius_sq - partial;
    if (rem < 0.0) return;
    const double span = std::sqrt(rem);
    const double center = -x[0];
    const double lo = (center - span - static_cast<double>(r)) / static_cast<double>(p);
    const double hi = (center + span - static_cast<double>(r)) / static_cast<double>(p);
    for (auto q = static_cast<std::int64_t>(std::ceil(lo - 1e-12));
         q <= static_cast<std::int64_t>(std::floor(hi + 1e-12)); ++q) {
      const double lam1 = static_cast<double>(r) + static_cast<double>(p) * static_cast<double>(q);
      const double d = x[0] + lam1;
      const double norm_sq = partial + d * d;
      if (norm_sq <= radius_sq + 1e-12) acc += std::exp(-norm_sq / (2.0 * t));
    }
  };

  const auto rec = [&](auto&& self, std::size_t dim, double partial) -> void {
    if (dim == k) { last_coord(partial); return; }
    const double rem = radius_sq - partial;
    if (rem < 0.0) return;
    const double span = std::sqrt(rem);
    const double c = -x[dim];
    const auto lo = static_cast<std::int64_t>(std::ceil(c - span - 1e-12));
    const auto hi = static_cast<std::int64_t>(std::floor(c + span + 1e-12));
    for (std::int64_t v = lo; v <= hi; ++v) {
      const double d = x[dim] + static_cast<double>(v);
      m[dim - 1] = v;
      self(self, dim + 1, partial + d * d);
    }
  };

  if (k == 1) last_coord(0.0);
  else rec(rec, 1, 0.0);
  return acc * std::pow(kTwoPi * t, -static_cast<double>(k) / 2.0);
}

double spatial_radius(double t) { return std::sqrt(2.0 * t * kLogEnvelope); }

// Estimated enumeration cost of each representation.
bool prefer_spatial(const IndexPLattice& l, double t) {
  const double dk = static_cast<double>(l.k);
  const double vol = std::pow(kPi, dk / 2.0) / std::tgamma(dk / 2.0 + 1.0);
  const double freq_cost = static_cast<double>(l.p) * vol * std::pow(freq_radius(t), dk);
  const double rs = spatial_radius(t);
  const double spatial_cost = vol * std::pow(rs, dk) / static_cast<double>(l.p) +
                              std::pow(2.0 * rs + 1.0, dk - 1.0);
  return spatial_cost < freq_cost;
}

}  // namespace

double theta_lattice_spatial(const IndexPLattice& l, std::span<const double> x, double t,
                             double tol) {
  if (!(t > 0.0)) throw ValidationError("theta_lattice: time must be positive");
  if (x.size() != l.k) throw ValidationError("theta_lattice: point dimension mismatch");
  if (l.k > 1 && !l.normalized())
    throw ValidationError("theta_lattice: spatial sum needs a normalized lattice");
  double radius = spatial_radius(t);
  // The per-term envelope is e^-45; enlarge if an exceptionally tight tol asks.
  while (std::exp(-radius * radius / (2.0 * t)) / std::pow(kTwoPi * t, l.k / 2.0) > 0.1 * tol)
    radius *= 1.2599;
  return spatial_sum(l, x, t, radius);
}

double theta_lattice(const IndexPLattice& l, std::span<const double> x, double t, double tol) {
  if (!(t > 0.0)) throw ValidationError("theta_lattice: time must be positive");
  if (x.size() != l.k) throw ValidationError("theta_lattice: point dimension mismatch");
  if (!(tol > 0.0 && tol <= 1e-6)) throw ValidationError("theta_lattice: tolerance must lie in (0, 1e-6]");
  if (prefer_spatial(l, t) && (l.k == 1 || l.normalized())) return theta_lattice_spatial(l, x, t, tol);
  const FrequencyTheta ft = make_frequency_theta(l, t, tol);
  return ft(x);
}

Theta1dBounds theta_1d_bounds_check(double alpha, double t, double x) {
  if (!(alpha > 0.0) || !(t > 0.0)) throw ValidationError("theta_1d_bounds_check: alpha, t must be positive");
  Theta1dBounds b;
  b.value = theta_circle(x / alpha, t / (alpha * alpha)) / alpha;

  // Leading spatial Gaussian plus a two-sided geometric tail.
  double frac = x / alpha - std::floor(x / alpha);
  frac = std::min(frac, 1.0 - frac);  // distance to nearest multiple, in alpha units
  b.leading = std::exp(-(alpha * frac) * (alpha * frac) / (2.0 * t)) / std::sqrt(kTwoPi * t);
  const double q1 = std::exp(-alpha * alpha / (8.0 * t));
  b.leading_err = q1 < 1.0 ? 2.0 * q1 / (std::sqrt(kTwoPi * t) * (1.0 - q1))
                           : std::numeric_limits<double>::infinity();

  // Flat frequency form 1/alpha plus its geometric tail.
  b.flat = 1.0 / alpha;
  const double q2 = std::exp(-2.0 * kPi * kPi * t / (alpha * alpha));
  b.flat_err = q2 < 1.0 ? 2.0 * q2 / (alpha * (1.0 - q2)) : std::numeric_limits<double>::infinity();

  b.within_leading = std::abs(b.value - b.leading) <= b.leading_err + 1e-14;
  b.within_flat = std::abs(b.value - b.flat) <= b.flat_err + 1e-14;
  return b;
}

McEstimate theta_tv_mc(const IndexPLattice& l, double t, std::size_t samples, std::uint64_t seed) {
  if (samples < 1000) throw ValidationError("theta_tv_mc: need at least 1000 samples");
  if (!(t > 0.0)) throw ValidationError("theta_tv_mc: time must be positive");
  if (!l.normalized()) throw ValidationError("theta_tv_mc: fundamental-domain sampling needs a_1 = 1");
  const std::uint64_t p = l.p;
  const std::size_t k = l.k;
  const double invp = 1.0 / static_cast<double>(p);

  const bool spatial = prefer_spatial(l, t);
  FrequencyTheta ft;
  if (!spatial) ft = make_frequency_theta(l, t, 1e-12);
  const double sp_radius = spatial_radius(t) + 1.0;

  // The TV integral is evaluated in the one-sided form
  //   TV = int_F (1/p - min(Theta, 1/p)) dx = p * E_x[(1/p - Theta(x))^+],
  // whose integrand is bounded by 1 after scaling; the two-sided |.| form has
  // the same mean but unbounded spikes that uniform sampling cannot resolve
  // for small t. Fixed-size blocks with per-block substreams keep the
  // estimate independent of any parallel schedule.
  constexpr std::size_t kBlock = 4096;
  SplitRng master(seed, 0x7468657461);
  double sum = 0.0, sum_sq = 0.0;
  std::vector<double> x(k);
  std::size_t done = 0;
  for (std::size_t block = 0; done < samples; ++block) {
    SplitRng rng = master.substream(block);
    const std::size_t m = std::min(kBlock, samples - done);
    double bs = 0.0, bsq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      x[0] = static_cast<double>(rng.next_below(p)) + rng.next_double();
      for (std::size_t d = 1; d < k; ++d) x[d] = rng.next_double();
      const double theta = spatial ? spatial_sum(l, x, t, sp_radius) : ft(x);
      const double q = static_cast<double>(p) * std::max(0.0, invp - theta);
      bs += q;
      bsq += q * q;
    }
    sum += bs;
    sum_sq += bsq;
    done += m;
  }
  const double n = static_cast<double>(samples);
  const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
  McEstimate e;
  e.estimate = sum / n;
  e.std_error = std::sqrt(var / n);
  return e;
}

double theta0_projection_tv(const IndexPLattice& l, double t) {
  if (!(t > 0.0)) throw ValidationError("theta0_projection_tv: time must be positive");
  const double ell = shortest_dual(l).norm;
  return tv_circle(t * ell * ell);
}

McEstimate continuous_tv_at_step(const GenSet& a, std::uint64_t n, std::size_t samples,
                                 std::uint64_t seed) {
  if (n < 1) throw ValidationError("continuous_tv_at_step: step count must be >= 1");
  const double t = 2.0 * static_cast<double>(n) / static_cast<double>(a.set_size());
  return theta_tv_mc(lattice_of(a), t, samples, seed);
}

}  // namespace cyclemix

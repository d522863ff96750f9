#include "cyclemix/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace cyclemix {

namespace {

constexpr double kGaussCut = 1e-18;

std::int64_t signed_rep(std::uint64_t r, std::uint64_t p) {
  return r <= p / 2 ? static_cast<std::int64_t>(r)
                    : static_cast<std::int64_t>(r) - static_cast<std::int64_t>(p);
}

unsigned __int128 coset_min_norm_num(const IndexPLattice& l, std::uint64_t c) {
  unsigned __int128 s = 0;
  for (std::uint64_t ai : l.a) {
    const std::uint64_t r = mul_mod(c, ai, l.p);
    const std::uint64_t m = std::min(r, l.p - r);
    s += static_cast<unsigned __int128>(m) * m;
  }
  return s;
}

}  // namespace

IndexPLattice IndexPLattice::create(std::uint64_t p, std::vector<std::uint64_t> a) {
  if (p < 3 || !is_prime(p)) throw ValidationError("IndexPLattice: modulus must be a prime >= 3");
  if (a.empty()) throw ValidationError("IndexPLattice: dimension must be >= 1");
  bool all_zero = true;
  for (std::uint64_t& x : a) {
    x %= p;
    all_zero = all_zero && x == 0;
  }
  if (all_zero) throw ValidationError("IndexPLattice: coefficient vector must be nonzero mod p");
  IndexPLattice l;
  l.p = p;
  l.k = a.size();
  l.a = std::move(a);
  return l;
}

IndexPLattice lattice_of(const GenSet& g) {
  const std::uint64_t p = g.p;
  // One candidate per dilation that maps some generator to the unit; the
  // orbit representative is the lexicographically least of these.
  std::vector<std::uint64_t> best;
  for (std::uint64_t gi : g.half) {
    const std::uint64_t c = inv_mod(gi, p);
    std::vector<std::uint64_t> cand;
    cand.reserve(g.half.size());
    for (std::uint64_t gj : g.half) cand.push_back(half_rep(mul_mod(c, gj, p), p));
    std::sort(cand.begin(), cand.end());
    if (best.empty() || cand < best) best = std::move(cand);
  }
  return IndexPLattice::create(p, std::move(best));
}

GenSet genset_of(const IndexPLattice& l) {
  std::vector<std::uint64_t> half;
  half.reserve(l.k);
  for (std::uint64_t ai : l.a) {
    if (ai == 0) throw ValidationError("genset_of: coefficient 0 mod p has no generator");
    half.push_back(half_rep(ai, l.p));
  }
  std::sort(half.begin(), half.end());
  for (std::size_t i = 1; i < half.size(); ++i)
    if (half[i] == half[i - 1])
      throw ValidationError("genset_of: residues collide after canonicalization (lattice outside the non-degenerate class)");
  return GenSet::create(l.p, std::move(half));
}

namespace {

// Recursively extends a fractional base point by integer shifts, collecting
// every translate with norm <= radius.
void enumerate_shifts(const std::vector<double>& base, double radius_sq, std::size_t dim,
                      std::vector<double>& cur, double partial,
                      const std::function<void(const std::vector<double>&)>& emit) {
  if (dim == base.size()) {
    emit(cur);
    return;
  }
  const double rem = radius_sq - partial;
  if (rem < 0.0) return;
  const double r = std::sqrt(rem);
  const double f = base[dim];
  const auto lo = static_cast<std::int64_t>(std::ceil(-r - f - 1e-12));
  const auto hi = static_cast<std::int64_t>(std::floor(r - f + 1e-12));
  for (std::int64_t m = lo; m <= hi; ++m) {
    const double v = f + static_cast<double>(m);
    const double q = partial + v * v;
    if (q > radius_sq + 1e-12) continue;
    cur[dim] = v;
    enumerate_shifts(base, radius_sq, dim + 1, cur, q, emit);
  }
}

DualVector make_dual(const std::vector<double>& v, std::uint64_t p, std::uint64_t multiplier) {
  DualVector d;
  d.v = v;
  double s = 0.0;
  std::int64_t g = 0;
  for (double x : v) {
    s += x * x;
    const auto scaled = static_cast<std::int64_t>(std::llround(x * static_cast<double>(p)));
    g = std::gcd(g, std::abs(scaled));
  }
  d.norm = std::sqrt(s);
  d.primitive = g == 1;
  d.multiplier = multiplier;
  return d;
}

}  // namespace

std::vector<DualVector> dual_short_vectors(const IndexPLattice& l, double radius) {
  if (!(radius > 0.0)) throw ValidationError("dual_short_vectors: radius must be positive");
  const std::uint64_t p = l.p;
  const std::size_t k = l.k;
  const double radius_sq = radius * radius;
  std::vector<DualVector> out;

  std::vector<double> cur(k);
  const auto emit_for = [&](std::uint64_t c) {
    return [&, c](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x * x;
      if (s == 0.0) return;  // exclude the origin (c = 0 branch)
      out.push_back(make_dual(v, p, c));
    };
  };

  // Pure integer vectors (Z^k is always contained in the dual).
  if (radius >= 1.0) {
    std::vector<double> zero(k, 0.0);
    enumerate_shifts(zero, radius_sq, 0, cur, 0.0, emit_for(0));
  }

  // Coset representatives c a / p, coordinate-wise reduced; the reduction
  // minimizes the norm within the coset, so for radius < 1/2 the reduced
  // point alone is a complete answer.
  std::vector<double> base(k);
  for (std::uint64_t c = 1; c < p; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint64_t r = mul_mod(c, l.a[i], p);
      base[i] = static_cast<double>(signed_rep(r, p)) / static_cast<double>(p);
      s += base[i] * base[i];
    }
    if (radius < 0.5) {
      if (s <= radius_sq + 1e-15) out.push_back(make_dual(base, p, c));
    } else {
      enumerate_shifts(base, radius_sq, 0, cur, 0.0, emit_for(c));
    }
  }
  return out;
}

DualVector shortest_dual(const IndexPLattice& l) {
  const std::uint64_t p = l.p;
  unsigned __int128 best = ~static_cast<unsigned __int128>(0);
  std::vector<std::uint64_t> best_multipliers;
  for (std::uint64_t c = 1; c < p; ++c) {
    const unsigned __int128 s = coset_min_norm_num(l, c);
    if (s < best) {
      best = s;
      best_multipliers.assign(1, c);
    } else if (s == best) {
      best_multipliers.push_back(c);
    }
  }
  const unsigned __int128 psq = static_cast<unsigned __int128>(p) * p;
  if (best >= psq) {
    // All coset representatives are at least as long as the unit vectors of
    // Z^k (tiny p relative to 2^k); the shortest dual is e_1.
    DualVector d;
    d.v.assign(l.k, 0.0);
    d.v[0] = 1.0;
    d.norm = 1.0;
    d.primitive = false;
    d.multiplier = 0;
    return d;
  }
  DualVector result;
  bool have = false;
  for (std::uint64_t c : best_multipliers) {
    std::vector<double> v(l.k);
    for (std::size_t i = 0; i < l.k; ++i)
      v[i] = static_cast<double>(signed_rep(mul_mod(c, l.a[i], p), p)) / static_cast<double>(p);
    // Normalize the sign pair: first nonzero coordinate positive.
    for (double x : v) {
      if (x != 0.0) {
        if (x < 0.0)
          for (double& y : v) y = -y;
        break;
      }
    }
    if (!have || v < result.v) {
      result = make_dual(v, p, c);
      have = true;
    }
  }
  return result;
}

namespace {

// Enumerates integer vectors of squared norm <= norm_sq_cap, recording the
// minimal squared norm that reaches each residue class.
void diameter_scan(const std::vector<std::uint64_t>& gens, std::uint64_t p, double norm_sq_cap,
                   std::vector<double>& best_sq, std::uint64_t& covered) {
  const std::size_t k = gens.size();
  const auto sp = static_cast<std::int64_t>(p);
  const auto rec = [&](auto&& self, std::size_t dim, double partial, std::uint64_t res) -> void {
    if (dim + 1 == k) {
      const double rem = norm_sq_cap - partial;
      if (rem < 0.0) return;
      const auto half_range = static_cast<std::int64_t>(std::floor(std::sqrt(rem)));
      const std::uint64_t step = gens[dim] % p;
      // Walk the residue incrementally over the last coordinate.
      const auto start = static_cast<std::uint64_t>(((-half_range) % sp + sp) % sp);
      std::uint64_t r = (res + mul_mod(start, step, p)) % p;
      for (std::int64_t m = -half_range; m <= half_range; ++m) {
        const double q = partial + static_cast<double>(m) * static_cast<double>(m);
        if (q < best_sq[r]) {
          if (best_sq[r] == std::numeric_limits<double>::infinity()) ++covered;
          best_sq[r] = q;
        }
        r += step;
        if (r >= p) r -= p;
      }
      return;
    }
    const double rem = norm_sq_cap - partial;
    if (rem < 0.0) return;
    const auto half_range = static_cast<std::int64_t>(std::floor(std::sqrt(rem)));
    for (std::int64_t m = -half_range; m <= half_range; ++m) {
      const std::uint64_t term = static_cast<std::uint64_t>(
          ((static_cast<__int128>(m) * gens[dim]) % p + p) % p);
      self(self, dim + 1, partial + static_cast<double>(m) * static_cast<double>(m),
           (res + term) % p);
    }
  };
  rec(rec, 0, 0.0, 0);
}

}  // namespace

double geometric_diameter(const GenSet& a) {
  const std::uint64_t p = a.p;
  const std::size_t k = a.k();
  std::vector<double> best_sq(p, std::numeric_limits<double>::infinity());
  std::uint64_t covered = 0;
  const double r0 = std::pow(static_cast<double>(p) * std::tgamma(static_cast<double>(k) / 2.0 + 1.0) /
                                 std::pow(std::acos(-1.0), static_cast<double>(k) / 2.0),
                             1.0 / static_cast<double>(k));
  for (int m = 0;; ++m) {
    const double radius = std::pow(2.0, 0.5 * m) * r0;
    diameter_scan(a.half, p, radius * radius, best_sq, covered);
    if (covered == p) break;
  }
  double max_sq = 0.0;
  for (double s : best_sq) max_sq = std::max(max_sq, s);
  return std::sqrt(max_sq);
}

namespace {

struct Vec2 {
  std::int64_t x, y;
  __int128 norm_sq() const {
    return static_cast<__int128>(x) * x + static_cast<__int128>(y) * y;
  }
};

__int128 dot(const Vec2& a, const Vec2& b) {
  return static_cast<__int128>(a.x) * b.x + static_cast<__int128>(a.y) * b.y;
}

// Lagrange-Gauss reduction of a rank-2 integer basis.
void gauss_reduce(Vec2& b1, Vec2& b2) {
  for (;;) {
    if (b1.norm_sq() > b2.norm_sq()) std::swap(b1, b2);
    const __int128 d = dot(b1, b2);
    const __int128 n = b1.norm_sq();
    // round(d / n) for signed 128-bit values
    __int128 mu = d >= 0 ? (d + n / 2) / n : -((-d + n / 2) / n);
    if (mu == 0) return;
    b2.x -= static_cast<std::int64_t>(mu) * b1.x;
    b2.y -= static_cast<std::int64_t>(mu) * b1.y;
  }
}

double covering_radius_2d(const IndexPLattice& l) {
  const auto p = static_cast<std::int64_t>(l.p);
  Vec2 b1{}, b2{};
  if (l.a[0] != 0) {
    const std::uint64_t t = mul_mod(l.a[1], inv_mod(l.a[0], l.p), l.p);
    b1 = {-static_cast<std::int64_t>(t), 1};
    b2 = {p, 0};
  } else {
    b1 = {1, 0};
    b2 = {0, p};
  }
  gauss_reduce(b1, b2);
  if (dot(b1, b2) > 0) { b2.x = -b2.x; b2.y = -b2.y; }
  const Vec2 b3{b1.x + b2.x, b1.y + b2.y};
  // Circumradius of the triangle (0, b1, b1+b2); the fundamental area is p/2*2.
  const double n1 = std::sqrt(static_cast<double>(b1.norm_sq()));
  const double n2 = std::sqrt(static_cast<double>(b2.norm_sq()));
  const double n3 = std::sqrt(static_cast<double>(b3.norm_sq()));
  return n1 * n2 * n3 / (2.0 * static_cast<double>(p));
}

// Exact distance from x to the lattice. The free coordinates 2..k are scanned
// over boxes of doubling radius (coordinate 1 is pinned to a residue class
// mod p); once the best distance found is at most the box radius, no point
// outside the box can improve it and the answer is certified.
double distance_to_lattice(const IndexPLattice& l, const std::vector<double>& x) {
  const std::uint64_t p = l.p;
  const std::size_t k = l.k;
  const auto pp = static_cast<__int128>(p);
  std::vector<std::int64_t> m(k - 1);

  const auto first_coord_dist_sq = [&](double partial, double best) {
    __int128 res = 0;
    for (std::size_t i = 1; i < k; ++i) {
      res += static_cast<__int128>(m[i - 1]) * static_cast<std::int64_t>(l.a[i]);
    }
    const auto r = static_cast<std::int64_t>((((-res) % pp) + pp) % pp);  // n1 = r mod p
    const double offset = (x[0] - static_cast<double>(r)) / static_cast<double>(p);
    const double n1 = static_cast<double>(r) + static_cast<double>(p) * std::round(offset);
    const double d = x[0] - n1;
    return partial + d * d < best ? partial + d * d : best;
  };

  const double dk = static_cast<double>(k);
  double radius = std::pow(static_cast<double>(p) * std::tgamma(dk / 2.0 + 1.0) /
                               std::pow(std::acos(-1.0), dk / 2.0),
                           1.0 / dk) +
                  1.0;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    const double radius_sq = radius * radius;
    const auto rec = [&](auto&& self, std::size_t dim, double partial) -> void {
      const double cap = std::min(radius_sq, best);
      if (partial >= cap) return;
      if (dim == k - 1) {
        best = first_coord_dist_sq(partial, best);
        return;
      }
      const double span = std::sqrt(cap - partial);
      const double c = x[dim + 1];
      const auto lo = static_cast<std::int64_t>(std::ceil(c - span - 1e-12));
      const auto hi = static_cast<std::int64_t>(std::floor(c + span + 1e-12));
      for (std::int64_t v = lo; v <= hi; ++v) {
        const double d = c - static_cast<double>(v);
        m[dim] = v;
        self(self, dim + 1, partial + d * d);
      }
    };
    rec(rec, 0, 0.0);
    if (best <= radius_sq) return std::sqrt(best);
    radius *= 2.0;
  }
}

}  // namespace

CoveringRadius covering_radius(const IndexPLattice& l, std::size_t samples, std::uint64_t seed) {
  if (l.k == 1) return {static_cast<double>(l.p) / 2.0, true};
  if (l.k == 2) return {covering_radius_2d(l), true};
  if (!l.normalized())
    throw ValidationError("covering_radius: sampled mode needs a normalized lattice (a_1 = 1)");
  SplitRng rng(seed, 0x636f76);
  double worst = 0.0;
  std::vector<double> x(l.k);
  for (std::size_t s = 0; s < samples; ++s) {
    x[0] = static_cast<double>(rng.next_below(l.p)) + rng.next_double();
    for (std::size_t i = 1; i < l.k; ++i) x[i] = rng.next_double();
    worst = std::max(worst, distance_to_lattice(l, x));
  }
  return {worst, false};
}

std::uint64_t ball_point_count(std::span<const double> center, double radius) {
  if (radius < 0.0) throw ValidationError("ball_point_count: radius must be >= 0");
  if (center.empty()) throw ValidationError("ball_point_count: dimension must be >= 1");
  const double radius_sq = radius * radius;
  std::uint64_t count = 0;
  const auto rec = [&](auto&& self, std::size_t dim, double partial) -> void {
    const double rem = radius_sq - partial;
    if (rem < 0.0) return;
    const double r = std::sqrt(rem);
    const double c = center[dim];
    const auto lo = static_cast<std::int64_t>(std::ceil(c - r - 1e-12));
    const auto hi = static_cast<std::int64_t>(std::floor(c + r + 1e-12));
    if (dim + 1 == center.size()) {
      for (std::int64_t v = lo; v <= hi; ++v) {
        const double d = c - static_cast<double>(v);
        if (partial + d * d <= radius_sq + 1e-12) ++count;
      }
      return;
    }
    for (std::int64_t v = lo; v <= hi; ++v) {
      const double d = c - static_cast<double>(v);
      self(self, dim + 1, partial + d * d);
    }
  };
  rec(rec, 0, 0.0);
  return count;
}

double kl_rate(double s) {
  if (!(s >= 1.0)) throw ValidationError("kl_rate: spacing must satisfy s >= 1");
  const double u = 1.0 / (2.0 * s);
  const double sin_theta = 2.0 * u * std::sqrt(1.0 - u * u);  // sin(2 asin(u))
  const double a = (1.0 + sin_theta) / (2.0 * sin_theta);
  const double b = (1.0 - sin_theta) / (2.0 * sin_theta);
  const double b_term = b > 0.0 ? b * std::log(b) : 0.0;
  return a * std::log(a) - b_term;
}

KlMax kl_max() {
  const auto f = [](double s) { return kl_rate(s) / (s * s); };
  // Coarse bracket, then golden-section to 1e-10.
  double lo = 1.0, hi = 8.0;
  double best_s = 1.0, best_v = f(1.0);
  for (int i = 0; i <= 1024; ++i) {
    const double s = 1.0 + (hi - 1.0) * i / 1024.0;
    const double v = f(s);
    if (v > best_v) { best_v = v; best_s = s; }
  }
  lo = std::max(1.0, best_s - 0.02);
  hi = best_s + 0.02;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo); f2 = f(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo); f1 = f(x1);
    }
  }
  KlMax m;
  m.s_star = 0.5 * (lo + hi);
  m.value = f(m.s_star);
  return m;
}

double minkowski_bound(std::uint64_t p, std::size_t k) {
  const double dk = static_cast<double>(k);
  return 2.0 / std::sqrt(std::acos(-1.0)) *
         std::pow(std::tgamma(dk / 2.0 + 1.0) / static_cast<double>(p), 1.0 / dk);
}

GenSet sample_genset(std::uint64_t p, std::size_t k, SplitRng& rng) {
  if (2 * k + 1 > p) throw ValidationError("sample_genset: need 2k+1 <= p");
  std::vector<std::uint64_t> reps(k);
  for (;;) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      reps[i] = half_rep(1 + rng.next_below(p - 1), p);
      for (std::size_t j = 0; j < i; ++j)
        if (reps[j] == reps[i]) { ok = false; break; }
    }
    if (ok) return GenSet::create(p, reps);
  }
}

IndexPLattice sample_lattice(std::uint64_t p, std::size_t k, SplitRng& rng,
                             LatticeEnsemble ensemble) {
  if (k < 1) throw ValidationError("sample_lattice: dimension must be >= 1");
  std::vector<std::uint64_t> v(k);
  if (ensemble == LatticeEnsemble::kAll) {
    for (;;) {
      bool nonzero = false;
      for (auto& x : v) {
        x = rng.next_below(p);
        nonzero = nonzero || x != 0;
      }
      if (!nonzero) continue;
      if (v[0] != 0) {
        const std::uint64_t c = inv_mod(v[0], p);
        for (auto& x : v) x = mul_mod(x, c, p);
      }
      return IndexPLattice::create(p, v);
    }
  }
  if (2 * k + 1 > p) throw ValidationError("sample_lattice: need 2k+1 <= p for the non-degenerate class");
  for (;;) {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      v[i] = 1 + rng.next_below(p - 1);
      for (std::size_t j = 0; j < i; ++j)
        if (half_rep(v[j], p) == half_rep(v[i], p)) { ok = false; break; }
    }
    if (!ok) continue;
    const std::uint64_t c = inv_mod(v[0], p);
    for (auto& x : v) x = mul_mod(x, c, p);
    return IndexPLattice::create(p, v);
  }
}

bool dual_contains(const IndexPLattice& l, std::span<const std::uint64_t> w) {
  if (w.size() != l.k) throw ValidationError("dual_contains: dimension mismatch");
  const std::uint64_t p = l.p;
  std::size_t pivot = l.k;
  for (std::size_t i = 0; i < l.k; ++i)
    if (l.a[i] != 0) { pivot = i; break; }
  const std::uint64_t c = mul_mod(w[pivot] % p, inv_mod(l.a[pivot], p), p);
  for (std::size_t i = 0; i < l.k; ++i)
    if (w[i] % p != mul_mod(c, l.a[i], p)) return false;
  return true;
}

double pair_statistic(const IndexPLattice& l, double rho, double c_ratio) {
  if (!(rho > 0.0) || !(c_ratio > 0.0)) throw ValidationError("pair_statistic: scales must be positive");
  const double dk = static_cast<double>(l.k);
  const double scale = std::pow(static_cast<double>(l.p), 1.0 / dk);
  const double sigma1 = 1.0 / (rho * scale);
  const double sigma2 = 1.0 / (c_ratio * rho * scale);
  const double two_pi = kTwoPi;

  const auto peak = [&](double sigma) { return std::pow(two_pi * sigma * sigma, -dk / 2.0); };
  const auto trunc_radius = [&](double sigma) {
    const double pk = peak(sigma);
    if (pk < kGaussCut) return 0.0;
    return sigma * std::sqrt(2.0 * std::log(pk / kGaussCut));
  };
  const double r_max = std::max(trunc_radius(sigma1), trunc_radius(sigma2));
  if (r_max <= 0.0) return 0.0;

  std::vector<DualVector> duals = dual_short_vectors(l, r_max);
  std::erase_if(duals, [](const DualVector& d) { return !d.primitive; });

  const auto density = [&](double sigma, double norm) {
    const double v = peak(sigma) * std::exp(-norm * norm / (2.0 * sigma * sigma));
    return v < kGaussCut ? 0.0 : v;
  };
  const auto negated = [&](const DualVector& x, const DualVector& y) {
    for (std::size_t i = 0; i < x.v.size(); ++i)
      if (std::abs(x.v[i] + y.v[i]) > 1e-12) return false;
    return true;
  };
  const auto equal = [&](const DualVector& x, const DualVector& y) {
    for (std::size_t i = 0; i < x.v.size(); ++i)
      if (std::abs(x.v[i] - y.v[i]) > 1e-12) return false;
    return true;
  };

  double sum = 0.0;
  for (const DualVector& v1 : duals) {
    const double g1 = density(sigma1, v1.norm);
    if (g1 == 0.0) continue;
    for (const DualVector& v2 : duals) {
      if (equal(v1, v2) || negated(v1, v2)) continue;
      const double g2 = density(sigma2, v2.norm);
      if (g2 == 0.0) continue;
      sum += g1 * g2;
    }
  }
  return sum;
}

LatticeGeometry lattice_geometry(const GenSet& a, bool with_covering, std::size_t covering_samples) {
  const IndexPLattice l = lattice_of(a);
  LatticeGeometry g;
  const DualVector sd = shortest_dual(l);
  g.shortest = sd.v;
  g.ell = sd.norm;
  g.diam_geom = geometric_diameter(a);
  g.minkowski_rhs = minkowski_bound(a.p, a.k());
  if (with_covering) {
    const CoveringRadius cr = covering_radius(l, covering_samples);
    g.covering = cr.value;
    g.covering_exact = cr.exact;
  }
  return g;
}

}  // namespace cyclemix

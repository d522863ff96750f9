#include "cyclemix/power2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace cyclemix {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

unsigned power2_ell(std::uint64_t p) {
  unsigned ell = 0;
  while ((std::uint64_t{1} << ell) < p) ++ell;
  return ell;
}

GenSet power2_set(std::uint64_t p) {
  if (p < 5 || !is_prime(p)) throw ValidationError("power2_set: need a prime p >= 5");
  const unsigned ell = power2_ell(p);
  std::map<std::uint64_t, unsigned> rep_to_power;
  std::vector<std::uint64_t> half;
  for (unsigned j = 0; j < ell; ++j) {
    const std::uint64_t r = pow_mod(2, j, p);
    const std::uint64_t rep = half_rep(r, p);
    if (auto it = rep_to_power.find(rep); it != rep_to_power.end())
      throw ValidationError("power2_set: powers 2^" + std::to_string(it->second) + " and 2^" +
                            std::to_string(j) + " collide up to sign mod " + std::to_string(p));
    rep_to_power.emplace(rep, j);
    half.push_back(rep);
  }
  return GenSet::create(p, std::move(half));
}

double c0(double tol) {
  if (!(tol >= 1e-14)) throw ValidationError("c0: tolerance must be >= 1e-14");
  double sum = 0.0;
  for (unsigned j = 1;; ++j) {
    sum += 1.0 - std::cos(kTwoPi / std::pow(2.0, j));
    const double tail = 2.0 * kPi * kPi / (3.0 * std::pow(4.0, j));
    if (tail < tol) break;
  }
  return sum;
}

double predicted_tmix(std::uint64_t p) {
  const double ell = power2_ell(p);
  return ell * std::log(ell) / (2.0 * c0());
}

std::vector<std::uint64_t> bp_set(std::uint64_t p, unsigned window) {
  const unsigned ell = power2_ell(p);
  if (window > ell) throw ValidationError("bp_set: window must satisfy J <= ell");
  const double width = static_cast<double>(p) * std::pow(2.0, -static_cast<double>(ell + window));
  std::set<std::uint64_t> out;
  for (unsigned j1 = 1; j1 <= ell; ++j1) {
    for (unsigned j2 = 1; j2 <= ell; ++j2) {
      if (j1 == j2) continue;
      // target = p (2^-j1 - 2^-j2); both products are exact dyadic doubles.
      const double target = static_cast<double>(p) * (std::pow(2.0, -static_cast<double>(j1)) -
                                                      std::pow(2.0, -static_cast<double>(j2)));
      const auto base = static_cast<std::int64_t>(std::floor(target));
      for (std::int64_t cand = base - 1; cand <= base + 2; ++cand) {
        if (std::abs(static_cast<double>(cand) - target) > width) continue;
        const auto sp = static_cast<std::int64_t>(p);
        const std::uint64_t xi = static_cast<std::uint64_t>(((cand % sp) + sp) % sp);
        if (xi != 0) out.insert(xi);
      }
    }
  }
  return {out.begin(), out.end()};
}

unsigned default_clump_window(std::uint64_t p) {
  // 2 log log ell, natural logs, rounded up; at desk scale this keeps the
  // near-dyadic frequency family rich enough for the second-moment test.
  const double ell = static_cast<double>(power2_ell(p));
  return std::max(1u, static_cast<unsigned>(std::ceil(2.0 * std::log(std::log(ell)))));
}

ClumpDecomposition alt_binary_expansion(std::uint64_t xi, std::uint64_t p, unsigned depth,
                                        unsigned window) {
  xi %= p;
  if (xi == 0) throw ValidationError("alt_binary_expansion: frequency must be nonzero mod p");
  const unsigned ell = power2_ell(p);
  if (depth < ell) throw ValidationError("alt_binary_expansion: depth must be >= ceil(log2 p)");
  if (window == 0) window = default_clump_window(p);

  ClumpDecomposition d;
  d.window = window;
  d.ell = ell;

  // Binary digits s_1 s_2 ... of (p - xi)/p = -xi/p mod 1, in exact integer
  // arithmetic. Subtracting the left shift bitwise turns the plain expansion
  // into the alternating one: the indices are the transitions s_i != s_{i+1}.
  std::uint64_t r = p - xi;
  std::vector<int> digits(depth + 2, 0);
  for (unsigned j = 1; j <= depth + 1; ++j) {
    r <<= 1;
    if (r >= p) { digits[j] = 1; r -= p; }
  }
  for (unsigned j = 1; j <= depth; ++j) {
    if (digits[j] != digits[j + 1]) d.indices.push_back(j);
  }
  if (d.indices.empty())
    throw ValidationError("alt_binary_expansion: no transitions found (increase depth)");
  // Coefficient of 2^-i at the first transition is +1 iff that digit is 1,
  // and must equal -sign.
  d.sign = digits[d.indices.front()] == 1 ? -1 : 1;

  // Clumps over indices in (0, ell]: maximal runs with consecutive gaps <= J.
  std::vector<std::uint32_t> in_range;
  for (std::uint32_t i : d.indices)
    if (i <= ell) in_range.push_back(i);
  d.sigma = in_range.size();
  for (std::size_t i = 0; i < in_range.size();) {
    std::vector<std::uint32_t> clump{in_range[i]};
    std::size_t j = i + 1;
    while (j < in_range.size() && in_range[j] - in_range[j - 1] <= window) clump.push_back(in_range[j++]);
    d.clumps.push_back(std::move(clump));
    i = j;
  }
  if (!d.clumps.empty()) {
    d.has_initial = d.clumps.front().front() <= window;
    d.has_final = d.clumps.back().back() + window > ell;
  }
  return d;
}

double ClumpDecomposition::reconstruct() const {
  double v = 0.0;
  int s = sign;
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const double term = std::pow(2.0, -static_cast<double>(indices[j]));
    v += (j % 2 == 0 ? -1.0 : 1.0) * s * term;  // (-1)^(j+1) with 1-based j
  }
  v -= std::floor(v);
  return v;
}

double savings(const SpectralProfile& prof, std::uint64_t xi) {
  xi %= prof.p;
  if (xi == 0) throw ValidationError("savings: frequency must be nonzero mod p");
  return static_cast<double>(prof.set_size) / 2.0 * (1.0 - prof.coeff[xi]);
}

CutoffReport cutoff_check(std::uint64_t p, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("cutoff_check: epsilon must lie in (0, 1/2)");
  const GenSet a = power2_set(p);
  const WalkAnalyzer walk(a);
  CutoffReport r;
  r.p = p;
  r.ell = power2_ell(p);
  r.predicted = predicted_tmix(p);
  r.t_mix = walk.mixing_time(std::exp(-1.0));
  r.t_mix_low = walk.mixing_time(1.0 - eps);
  r.t_mix_high = walk.mixing_time(eps);
  r.ratio_to_predicted = static_cast<double>(r.t_mix) / r.predicted;
  r.window_ratio = r.t_mix_low > 0
      ? static_cast<double>(r.t_mix_high) / static_cast<double>(r.t_mix_low)
      : std::numeric_limits<double>::infinity();
  const double ell = r.ell;
  const double c = c0();
  r.beta = 2.0 * c * static_cast<double>(r.t_mix) / ell - std::log(ell);
  r.tail_bound = std::exp(-r.beta) +
                 std::exp(-r.beta / c) * std::log(ell) / std::pow(ell, 1.0 / c);
  const std::vector<std::uint64_t> bp = bp_set(p, default_clump_window(p));
  r.bp_size = bp.size();
  const auto n_diag = static_cast<std::uint64_t>(
      std::max(1.0, std::round((1.0 - eps) * r.predicted)));
  const ChebyshevDiagnostic diag = chebyshev_diagnostic(walk.profile(), bp, n_diag);
  r.diag_normalized_mean = diag.normalized_mean;
  r.diag_correlation_ratio = diag.correlation_ratio;
  return r;
}

}  // namespace cyclemix

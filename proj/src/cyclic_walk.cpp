#include "cyclemix/cyclic_walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cyclemix {

namespace {
constexpr double kFlushThreshold = 1e-18;  // below this the spectrum is uniform in doubles
constexpr double kNegClamp = -1e-15;

// Sign-tracked integer power; 0^0 = 1 by convention.
double pow_signed(double base, std::uint64_t n) {
  if (n == 0) return 1.0;
  const double mag = std::pow(std::abs(base), static_cast<double>(n));
  return (base < 0.0 && (n & 1)) ? -mag : mag;
}
}  // namespace

CyclicMeasure CyclicMeasure::create(std::uint64_t p, std::vector<double> weights) {
  if (weights.size() != p) throw ValidationError("CyclicMeasure: weight vector length must equal p");
  double sum = 0.0;
  for (double& w : weights) {
    if (w < kNegClamp) throw ValidationError("CyclicMeasure: negative weight " + std::to_string(w));
    if (w < 0.0) w = 0.0;
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("CyclicMeasure: weights sum to " + std::to_string(sum));
  CyclicMeasure m;
  m.p = p;
  m.weights = std::move(weights);
  return m;
}

CyclicMeasure CyclicMeasure::point_mass(std::uint64_t p) {
  std::vector<double> w(p, 0.0);
  w[0] = 1.0;
  return {p, std::move(w)};
}

CyclicMeasure CyclicMeasure::uniform(std::uint64_t p) {
  return {p, std::vector<double>(p, 1.0 / static_cast<double>(p))};
}

SpectralProfile fourier_profile(const GenSet& a) {
  const std::uint64_t p = a.p;
  const std::uint64_t m = (p - 1) / 2;
  SpectralProfile prof;
  prof.p = p;
  prof.set_size = a.set_size();
  prof.coeff.assign(p, 0.0);
  prof.coeff[0] = 1.0;
  const double norm = 1.0 / static_cast<double>(prof.set_size);
  for (std::uint64_t xi = 1; xi <= m; ++xi) {
    double s = 0.0;
    for (std::uint64_t g : a.half) {
      const std::uint64_t r = mul_mod(xi, g, p);
      s += std::cos(kTwoPi * static_cast<double>(r) / static_cast<double>(p));
    }
    const double c = (1.0 + 2.0 * s) * norm;
    prof.coeff[xi] = c;
    prof.coeff[p - xi] = c;
  }
  return prof;
}

double tv_to_uniform(const CyclicMeasure& m) {
  const double u = 1.0 / static_cast<double>(m.p);
  double s = 0.0;
  for (double w : m.weights) s += std::abs(w - u);
  return 0.5 * s;
}

double l2_to_uniform(const SpectralProfile& prof, std::uint64_t n) {
  if (n < 1) throw ValidationError("l2_to_uniform: n must be >= 1");
  const std::uint64_t m = (prof.p - 1) / 2;
  double s = 0.0;
  for (std::uint64_t xi = 1; xi <= m; ++xi) {
    const double c = std::abs(prof.coeff[xi]);
    if (c > 0.0) s += 2.0 * std::exp(2.0 * static_cast<double>(n) * std::log(c));
  }
  return 0.5 * std::sqrt(s);
}

double spectral_gap(const SpectralProfile& prof) {
  double max_abs = 0.0;
  for (std::uint64_t xi = 1; xi < prof.p; ++xi) max_abs = std::max(max_abs, std::abs(prof.coeff[xi]));
  if (max_abs >= 1.0) throw ValidationError("spectral_gap: profile is non-generating (gap = 0)");
  return 1.0 - max_abs;
}

double relaxation_time(double gap) {
  if (gap <= 0.0 || gap > 1.0) throw ValidationError("relaxation_time: gap must lie in (0, 1]");
  if (gap == 1.0) return 0.0;
  return -1.0 / std::log1p(-gap);
}

ChebyshevDiagnostic chebyshev_diagnostic(const SpectralProfile& prof,
                                         const std::vector<std::uint64_t>& freq_set,
                                         std::uint64_t n) {
  const std::uint64_t p = prof.p;
  if (freq_set.empty()) throw ValidationError("chebyshev_diagnostic: empty frequency set");
  std::vector<std::uint64_t> b(freq_set);
  for (std::uint64_t& xi : b) xi %= p;
  std::sort(b.begin(), b.end());
  for (std::uint64_t xi : b) {
    if (xi == 0) throw ValidationError("chebyshev_diagnostic: 0 must not belong to the frequency set");
    if (!std::binary_search(b.begin(), b.end(), p - xi))
      throw ValidationError("chebyshev_diagnostic: frequency set is not symmetric");
  }
  double mean = 0.0;
  for (std::uint64_t xi : b) mean += pow_signed(prof.coeff[xi], n);
  double num = 0.0;
  for (std::uint64_t x1 : b)
    for (std::uint64_t x2 : b) num += pow_signed(prof.coeff[(x1 + p - x2) % p], n);
  ChebyshevDiagnostic d;
  d.normalized_mean = mean / std::sqrt(static_cast<double>(b.size()));
  d.correlation_ratio = num / (mean * mean);
  return d;
}

WalkAnalyzer::WalkAnalyzer(GenSet a) : a_(std::move(a)), prof_(fourier_profile(a_)) {
  const std::uint64_t m = (prof_.p - 1) / 2;
  log_abs_.resize(m + 1);
  negative_.resize(m + 1);
  log_abs_[0] = 0.0;
  negative_[0] = false;
  for (std::uint64_t xi = 1; xi <= m; ++xi) {
    const double c = prof_.coeff[xi];
    negative_[xi] = c < 0.0;
    const double ac = std::abs(c);
    log_abs_[xi] = ac > 0.0 ? std::log(ac) : -std::numeric_limits<double>::infinity();
    max_abs_ = std::max(max_abs_, ac);
  }
  if (max_abs_ >= 1.0) throw ValidationError("WalkAnalyzer: non-generating spectral profile");
  gap_ = 1.0 - max_abs_;
}

double WalkAnalyzer::relaxation() const { return relaxation_time(gap_); }

const ChirpZ& WalkAnalyzer::chirp() const {
  if (!chirp_) {
    const std::size_t half = static_cast<std::size_t>((prof_.p - 1) / 2) + 1;
    chirp_ = std::make_unique<ChirpZ>(half, half, prof_.p);
  }
  return *chirp_;
}

double WalkAnalyzer::power_spectrum(std::uint64_t n, std::vector<double>& spectrum) const {
  const std::uint64_t m = (prof_.p - 1) / 2;
  spectrum.assign(m + 1, 0.0);
  spectrum[0] = 1.0;
  if (max_abs_ > 0.0 &&
      static_cast<double>(n) * std::log(max_abs_) < std::log(kFlushThreshold))
    return -1.0;
  double max_term = 0.0;
  const double dn = static_cast<double>(n);
  for (std::uint64_t xi = 1; xi <= m; ++xi) {
    double v = std::exp(dn * log_abs_[xi]);
    if (v < kFlushThreshold) v = 0.0;
    if (negative_[xi] && (n & 1)) v = -v;
    spectrum[xi] = v;
    max_term = std::max(max_term, std::abs(v));
  }
  return max_term;
}

CyclicMeasure WalkAnalyzer::distribution(std::uint64_t n) const {
  const std::uint64_t p = prof_.p;
  if (n == 0) return CyclicMeasure::point_mass(p);
  std::vector<double> spectrum;
  if (power_spectrum(n, spectrum) < 0.0) return CyclicMeasure::uniform(p);
  const std::uint64_t m = (p - 1) / 2;
  std::vector<std::complex<double>> half_out(m + 1);
  chirp().run(spectrum, half_out);
  // mu(x) = (1/p)(2 Re X(x) - 1) with X over xi = 0..m; mirror to x > m.
  std::vector<double> w(p);
  const double invp = 1.0 / static_cast<double>(p);
  for (std::uint64_t x = 0; x <= m; ++x) {
    double v = (2.0 * half_out[x].real() - 1.0) * invp;
    // Transform round-off can push true-zero entries slightly negative;
    // anything within the 1e-10 accuracy contract is flushed to zero.
    if (v < 0.0 && v >= -1e-10) v = 0.0;
    w[x] = v;
    if (x > 0) w[p - x] = v;
  }
  return CyclicMeasure::create(p, std::move(w));
}

double WalkAnalyzer::tv_at(std::uint64_t n) const {
  if (auto it = tv_cache_.find(n); it != tv_cache_.end()) return it->second;
  const std::uint64_t p = prof_.p;
  double tv;
  if (n == 0) {
    tv = 1.0 - 1.0 / static_cast<double>(p);
  } else {
    std::vector<double> spectrum;
    if (power_spectrum(n, spectrum) < 0.0) {
      tv = 0.0;
    } else {
      const std::uint64_t m = (p - 1) / 2;
      std::vector<std::complex<double>> half_out(m + 1);
      chirp().run(spectrum, half_out);
      const double invp = 1.0 / static_cast<double>(p);
      double s = std::abs((2.0 * half_out[0].real() - 1.0) * invp - invp);
      for (std::uint64_t x = 1; x <= m; ++x)
        s += 2.0 * std::abs((2.0 * half_out[x].real() - 1.0) * invp - invp);
      tv = 0.5 * s;
    }
  }
  tv_cache_[n] = tv;
  return tv;
}

double WalkAnalyzer::l2_at(std::uint64_t n) const { return l2_to_uniform(prof_, n); }

double WalkAnalyzer::tv_lower_bound(std::uint64_t n) const {
  return 0.5 * std::exp(static_cast<double>(n) * std::log(max_abs_));
}

bool WalkAnalyzer::tv_leq(std::uint64_t n, double eps) const {
  if (n == 0) return 1.0 - 1.0 / static_cast<double>(prof_.p) <= eps;
  if (tv_lower_bound(n) > eps) return false;
  if (l2_at(n) <= eps) return true;
  return tv_at(n) <= eps;
}

std::uint64_t WalkAnalyzer::mixing_time(double eps) const {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("mixing_time: epsilon must lie in (0, 1)");
  if (1.0 - 1.0 / static_cast<double>(prof_.p) <= eps) return 0;
  std::uint64_t lo = 0, hi = 1;
  while (!tv_leq(hi, eps)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (tv_leq(mid, eps)) hi = mid;
    else lo = mid;
  }
  return hi;
}

WindowReport WalkAnalyzer::window_report(double eps) const {
  if (!(eps > 0.0 && eps < std::exp(-1.0)))
    throw ValidationError("window_report: epsilon must lie in (0, 1/e)");
  WindowReport w;
  w.t_low = mixing_time(1.0 - eps);
  w.t_high = mixing_time(eps);
  w.width = w.t_high - w.t_low;
  w.t_mix = mixing_time(std::exp(-1.0));
  w.normalized_width = w.t_mix > 0
      ? static_cast<double>(w.width) * static_cast<double>(a_.k()) / static_cast<double>(w.t_mix)
      : 0.0;
  return w;
}

MixingReport WalkAnalyzer::report(const std::vector<double>& eps_list) const {
  MixingReport r;
  r.gap = gap_;
  r.t_rel = relaxation();
  std::uint64_t n_max = 1;
  for (double e : eps_list) {
    const std::uint64_t t = mixing_time(e);
    r.t_mix[e] = t;
    n_max = std::max(n_max, t);
  }
  for (std::uint64_t n = 1; n <= 2 * n_max; n *= 2) r.tv_profile.emplace_back(n, tv_at(n));
  return r;
}

CyclicMeasure distribution_at(const GenSet& a, std::uint64_t n) { return WalkAnalyzer(a).distribution(n); }

std::uint64_t mixing_time(const GenSet& a, double eps) { return WalkAnalyzer(a).mixing_time(eps); }

WindowReport window_report(const GenSet& a, double eps) { return WalkAnalyzer(a).window_report(eps); }

}  // namespace cyclemix

// Exact spectral and distributional analysis of the random walk driven by the
// uniform measure on a symmetric lazy generating set of Z/pZ: Fourier profile,
// convolution powers, TV/L2 distances to uniform, spectral gap, relaxation and
// mixing times, transition window, and the second-moment cut-off diagnostic.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "cyclemix/genset.hpp"
#include "cyclemix/transform.hpp"

namespace cyclemix {

// Probability measure on Z/pZ. Weights sum to 1 within 1e-12; round-off
// negatives above -1e-15 are clamped to zero on construction.
struct CyclicMeasure {
  std::uint64_t p = 0;
  std::vector<double> weights;

  static CyclicMeasure create(std::uint64_t p, std::vector<double> weights);
  static CyclicMeasure point_mass(std::uint64_t p);
  static CyclicMeasure uniform(std::uint64_t p);
};

// Real eigenvalues of the transition kernel indexed by frequency:
// coeff[xi] = (1 + 2 sum_a cos(2 pi xi a / p)) / (2k+1). coeff[0] = 1 exactly
// and coeff[xi] = coeff[p - xi] by construction.
struct SpectralProfile {
  std::uint64_t p = 0;
  std::size_t set_size = 0;  // 2k+1 of the generating set
  std::vector<double> coeff;
};

SpectralProfile fourier_profile(const GenSet& a);

double tv_to_uniform(const CyclicMeasure& m);

// (1/2) sqrt(sum_{xi != 0} coeff[xi]^(2n)); upper-bounds TV by Cauchy-Schwarz.
double l2_to_uniform(const SpectralProfile& prof, std::uint64_t n);

// gap = 1 - max_{xi != 0} |coeff[xi]|. Throws if the profile is degenerate
// (some nonzero frequency has |coeff| = 1, i.e. the measure does not generate).
double spectral_gap(const SpectralProfile& prof);

// t_rel = -1/log(1 - gap); 0 when gap = 1, error when gap <= 0.
double relaxation_time(double gap);

struct ChebyshevDiagnostic {
  double normalized_mean = 0.0;    // |B|^{-1/2} sum_{xi in B} coeff[xi]^n
  double correlation_ratio = 0.0;  // sum coeff[xi1-xi2]^n / (sum coeff[xi]^n)^2
};

// B must be nonempty, symmetric (xi in B <=> p-xi in B) and avoid 0.
ChebyshevDiagnostic chebyshev_diagnostic(const SpectralProfile& prof,
                                         const std::vector<std::uint64_t>& freq_set,
                                         std::uint64_t n);

struct WindowReport {
  std::uint64_t t_low = 0;     // t_mix(1-eps)
  std::uint64_t t_high = 0;    // t_mix(eps)
  std::uint64_t width = 0;     // t_high - t_low
  std::uint64_t t_mix = 0;     // t_mix(1/e)
  double normalized_width = 0; // width * k / t_mix
};

struct MixingReport {
  double gap = 0.0;
  double t_rel = 0.0;
  std::map<double, std::uint64_t> t_mix;              // per epsilon
  std::vector<std::pair<std::uint64_t, double>> tv_profile;  // (n, TV(n))
  struct Predicted {
    double ell = 0.0;             // shortest dual vector norm
    double t_rel_prediction = 0;  // (2k+1) / (4 pi^2 ell^2)
    double tau0_t_rel = 0.0;      // tau0 * t_rel
  };
  std::optional<Predicted> predicted;  // filled by the experiments layer
};

// Holds the spectral profile plus transform machinery so that repeated TV
// evaluations (mixing-time searches, cut-off scans) reuse the setup. The
// mixing-time search consults the cheap spectral bounds
//   (1/2) max|coeff|^n <= TV(n) <= l2_to_uniform(n)
// and only pays for an exact transform when they fail to decide.
class WalkAnalyzer {
 public:
  explicit WalkAnalyzer(GenSet a);

  const GenSet& genset() const { return a_; }
  const SpectralProfile& profile() const { return prof_; }

  CyclicMeasure distribution(std::uint64_t n) const;
  double tv_at(std::uint64_t n) const;        // exact, memoized
  double l2_at(std::uint64_t n) const;
  double tv_lower_bound(std::uint64_t n) const;
  double gap() const { return gap_; }
  double relaxation() const;
  double max_abs_coeff() const { return max_abs_; }

  // Least n with TV(n) <= eps, by doubling bracket plus bisection
  // (TV is non-increasing in n).
  std::uint64_t mixing_time(double eps) const;

  WindowReport window_report(double eps) const;

  MixingReport report(const std::vector<double>& eps_list) const;

 private:
  const ChirpZ& chirp() const;
  // Fills spectrum[xi] = coeff[xi]^n for xi = 0..(p-1)/2 (sign-tracked exp/log
  // powering); returns max over xi != 0, or -1 when the whole tail flushed
  // below the uniform threshold 1e-18.
  double power_spectrum(std::uint64_t n, std::vector<double>& spectrum) const;
  bool tv_leq(std::uint64_t n, double eps) const;

  GenSet a_;
  SpectralProfile prof_;
  std::vector<double> log_abs_;   // log|coeff[xi]|, xi <= (p-1)/2 (-inf at zeros)
  std::vector<bool> negative_;
  double max_abs_ = 0.0;
  double gap_ = 0.0;
  mutable std::unique_ptr<ChirpZ> chirp_;
  mutable std::map<std::uint64_t, double> tv_cache_;
};

// One-shot conveniences built on WalkAnalyzer.
CyclicMeasure distribution_at(const GenSet& a, std::uint64_t n);
std::uint64_t mixing_time(const GenSet& a, double eps);
WindowReport window_report(const GenSet& a, double eps);

}  // namespace cyclemix

// The power-of-2 walk: its generating set, the series constant governing the
// decay rate, the predicted cut-off location, the near-dyadic frequency family
// with its eigenvalue floor, the alternating binary expansion with clump
// structure, per-frequency savings, and an end-to-end cut-off harness.

#pragma once

#include <cstdint>
#include <vector>

#include "cyclemix/cyclic_walk.hpp"
#include "cyclemix/genset.hpp"

namespace cyclemix {

// ceil(log2 p): number of powers of two in the set.
unsigned power2_ell(std::uint64_t p);

// {0, +-2^j : j < ell} reduced to half form. Errors out (naming the powers)
// when two powers collide up to sign, since the walk needs 2*ell+1 distinct
// elements.
GenSet power2_set(std::uint64_t p);

// sum_{j>=1} (1 - cos(2 pi / 2^j)) with tail bound 2 pi^2 4^-J / 3.
double c0(double tol = 1e-12);

// ell ln(ell) / (2 c0): the predicted total-variation mixing time.
double predicted_tmix(std::uint64_t p);

// Frequencies xi with |xi/p - 2^-j1 + 2^-j2| <= 2^-(ell+J) mod 1 for some
// 1 <= j1 != j2 <= ell; symmetric, 0 excluded.
std::vector<std::uint64_t> bp_set(std::uint64_t p, unsigned window);

// Unique representation xi/p = sign * sum_j (-1)^j 2^{-i_j} mod 1, truncated
// at `depth` bits, with the indices inside (0, ell] partitioned into maximal
// runs of gaps <= J (clumps).
struct ClumpDecomposition {
  int sign = 1;
  std::vector<std::uint32_t> indices;               // i_1 < i_2 < ... <= depth
  unsigned window = 0;                              // J
  std::uint64_t ell = 0;
  std::vector<std::vector<std::uint32_t>> clumps;   // partition of indices in (0, ell]
  std::size_t sigma = 0;                            // #indices in (0, ell]
  bool has_initial = false;                         // first clump starts at <= J
  bool has_final = false;                           // last clump ends above ell - J

  // sign * sum over indices <= depth of (-1)^j 2^-i_j, reduced mod 1 to [0,1).
  double reconstruct() const;
};

ClumpDecomposition alt_binary_expansion(std::uint64_t xi, std::uint64_t p, unsigned depth,
                                        unsigned window = 0);

// Per-frequency additive decay: (2 ell + 1)/2 * (1 - coeff[xi]).
double savings(const SpectralProfile& prof, std::uint64_t xi);

// Default diagnostic window ceil(2 log2 log2 p).
unsigned default_clump_window(std::uint64_t p);

struct CutoffReport {
  std::uint64_t p = 0;
  unsigned ell = 0;
  double predicted = 0.0;          // predicted_tmix(p)
  std::uint64_t t_mix = 0;         // at 1/e
  std::uint64_t t_mix_low = 0;     // at 1-eps
  std::uint64_t t_mix_high = 0;    // at eps
  double ratio_to_predicted = 0.0;
  double window_ratio = 0.0;       // t_mix(eps) / t_mix(1-eps)
  double beta = 0.0;               // measured: 2 c0 t_mix / ell - ln(ell)
  double tail_bound = 0.0;         // e^-beta + e^(-beta/c0) ln(ell)/ell^(1/c0)
  std::size_t bp_size = 0;
  double diag_normalized_mean = 0.0;   // second-moment diagnostic at (1-eps) * predicted
  double diag_correlation_ratio = 0.0;
};

CutoffReport cutoff_check(std::uint64_t p, double eps);

}  // namespace cyclemix

// Index-p lattices of Z^k attached to generating sets: the correspondence
// A <-> Lambda(A), dual-lattice enumeration (shortest vector, short-vector
// lists), geometric diameter, covering radii, ball point counts, the sphere
// packing rate function, uniform samplers, and the short-pair statistic.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cyclemix/genset.hpp"
#include "cyclemix/rng.hpp"

namespace cyclemix {

// Lambda = {n in Z^k : sum n_i a_i = 0 mod p}, index p in Z^k. The coefficient
// vector a doubles as the dual generator: Lambda^vee = Z^k + Z (a/p). Scaling
// a by a nonzero constant mod p leaves the lattice unchanged; a is stored with
// a[0] = 1 whenever a[0] != 0 ("normalized"). Lattices built from a GenSet are
// additionally canonical under the signed-permutation x dilation action.
struct IndexPLattice {
  std::uint64_t p = 0;
  std::size_t k = 0;
  std::vector<std::uint64_t> a;

  static IndexPLattice create(std::uint64_t p, std::vector<std::uint64_t> a);
  bool normalized() const { return !a.empty() && a[0] == 1; }
};

// Canonical lattice of the orbit of A under dilations and signed coordinate
// permutations: lexicographically least among the half-reduced sorted vectors
// of all dilations that contain the unit.
IndexPLattice lattice_of(const GenSet& a);

// Inverse map; fails when half-reduction collides (the lattice has a vector of
// squared norm 1 or 2, i.e. it lies outside the non-degenerate class).
GenSet genset_of(const IndexPLattice& l);

struct DualVector {
  std::vector<double> v;
  double norm = 0.0;
  bool primitive = false;      // p*v has coprime integer coordinates
  std::uint64_t multiplier = 0;  // v = c a/p + shift; 0 for pure integer vectors
};

// All dual vectors with 0 < |v| <= radius. Complete: for each multiplier class
// the coordinate-wise reduced representative minimizes the norm, and integer
// shifts are enumerated up to the radius.
std::vector<DualVector> dual_short_vectors(const IndexPLattice& l, double radius);

// Minimal-norm nonzero dual vector; ties broken lexicographically among the
// sign pair (first nonzero coordinate positive).
DualVector shortest_dual(const IndexPLattice& l);

// max over residues x of the minimal Euclidean norm of an integer vector n
// with n . half = x mod p; exact, by enumeration over growing balls.
double geometric_diameter(const GenSet& a);

struct CoveringRadius {
  double value = 0.0;
  bool exact = false;  // exact for k <= 2, sampled lower bound for k >= 3
};

CoveringRadius covering_radius(const IndexPLattice& l, std::size_t samples = 100000,
                               std::uint64_t seed = 1);

// |Z^k n B_2(center, radius)| by coordinate-wise bounded enumeration.
std::uint64_t ball_point_count(std::span<const double> center, double radius);

// Kabatiansky-Levenshtein exponential rate at spacing s >= 1.
double kl_rate(double s);

struct KlMax {
  double s_star = 0.0;
  double value = 0.0;  // max of kl_rate(s)/s^2 over s >= 1
};
KlMax kl_max();

// (2/sqrt(pi)) (Gamma(k/2+1)/p)^{1/k}: upper bound for the shortest dual norm.
double minkowski_bound(std::uint64_t p, std::size_t k);

// Uniform over the generating sets of size 2k+1 (batch rejection on ordered
// tuples, then half-reduction).
GenSet sample_genset(std::uint64_t p, std::size_t k, SplitRng& rng);

enum class LatticeEnsemble {
  kAll,           // dual generator uniform over nonzero vectors mod p
  kNonDegenerate  // coordinates nonzero and pairwise != up to sign
};

IndexPLattice sample_lattice(std::uint64_t p, std::size_t k, SplitRng& rng,
                             LatticeEnsemble ensemble);

// Is w/p + Z^k contained in the dual lattice? (w nonzero mod p.)
bool dual_contains(const IndexPLattice& l, std::span<const std::uint64_t> w);

// Sum over ordered pairs of distinct non-paired primitive dual vectors of the
// Gaussian product eta_k(1/(rho p^{1/k}), v1) eta_k(1/(c_ratio rho p^{1/k}), v2),
// truncated where a Gaussian factor drops below 1e-18.
double pair_statistic(const IndexPLattice& l, double rho, double c_ratio);

struct LatticeGeometry {
  std::vector<double> shortest;  // the shortest dual vector
  double ell = 0.0;              // its norm
  double diam_geom = 0.0;
  double covering = 0.0;
  bool covering_exact = false;
  double minkowski_rhs = 0.0;
};

LatticeGeometry lattice_geometry(const GenSet& a, bool with_covering = true,
                                 std::size_t covering_samples = 100000);

}  // namespace cyclemix

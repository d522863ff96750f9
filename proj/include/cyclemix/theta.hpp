// Gaussian diffusion on R/Z and on R^k/Lambda: theta evaluation in spatial and
// frequency form, the circle TV profile and its e-threshold constant, Monte
// Carlo TV on lattice quotients, the shortest-vector line projection, and the
// discrete-walk comparison time change.

#pragma once

#include <cstdint>
#include <span>

#include "cyclemix/genset.hpp"
#include "cyclemix/lattice.hpp"

namespace cyclemix {

// Heat kernel density at time t on R/Z (both Poisson-summed forms; the faster
// converging one is chosen by t against 1/(2 pi)).
double theta_circle(double x, double t);

// (1/2) int_0^1 |theta(x, t) - 1| dx, exact quadrature with the interior sign
// change isolated first.
double tv_circle(double t);

// Solves tv_circle(t) = 1/e and returns 2 pi^2 t: the mixing-to-relaxation
// ratio of the diffusion on the circle.
double tau0(double tol = 1e-10);

// Theta on R^k/Lambda at point x, absolute truncation error below tol.
// Evaluates whichever of the frequency/spatial sums is cheaper.
double theta_lattice(const IndexPLattice& l, std::span<const double> x, double t,
                     double tol = 1e-9);

// Spatial-sum evaluation only (test oracle for the Poisson identity).
double theta_lattice_spatial(const IndexPLattice& l, std::span<const double> x, double t,
                             double tol = 1e-9);

struct Theta1dBounds {
  double value = 0.0;         // Theta(x, t; alpha Z)
  double leading = 0.0;       // dominant spatial Gaussian
  double leading_err = 0.0;   // geometric envelope around it
  double flat = 0.0;          // 1/alpha
  double flat_err = 0.0;      // geometric envelope around it
  bool within_leading = false;
  bool within_flat = false;
};

// Evaluates the 1-d theta on the scaled integer lattice together with both
// two-sided geometric error envelopes (factor-2 constants).
Theta1dBounds theta_1d_bounds_check(double alpha, double t, double x);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Monte Carlo TV between Theta(., t; Lambda) and the uniform density 1/p,
// sampling the fundamental domain (unit cube translated along e_1; requires a
// normalized lattice). Uses the one-sided integrand p (1/p - Theta)^+, which
// equals the TV in expectation and stays bounded near t = 0. Block-wise
// deterministic in (seed, block index).
McEstimate theta_tv_mc(const IndexPLattice& l, double t, std::size_t samples,
                       std::uint64_t seed);

// TV of the projection of Theta onto the line of the shortest dual vector;
// equals the circle TV at time t * ell^2 and lower-bounds the full theta TV.
double theta0_projection_tv(const IndexPLattice& l, double t);

// The walk-to-diffusion comparison: theta TV at time 2n/(2k+1) on Lambda(A).
McEstimate continuous_tv_at_step(const GenSet& a, std::uint64_t n, std::size_t samples,
                                 std::uint64_t seed);

}  // namespace cyclemix

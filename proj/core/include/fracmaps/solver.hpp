#pragma once

// Minimisation of the discrete energy over N-valued interior values with the
// exterior data held fixed: projected gradient descent with Armijo
// backtracking for targets with nontrivial tangent spaces, and a brute-force
// single-flip certificate for the two-point target.

#include <cstdint>
#include <string>
#include <vector>

#include "fracmaps/discrete_energy.hpp"
#include "fracmaps/manifold.hpp"

namespace fracmaps {

struct SolverOptions {
  int max_iters = 20000;
  /// Threshold on the h-weighted L2 norm of the Riemannian gradient.
  double grad_tol = 1e-6;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  std::uint64_t seed = 0;
  /// Amplitude of a seeded random tangent kick applied to the interior
  /// values before descent. Zero disables it. Needed to leave exact critical
  /// points such as the antipodal jump.
  double perturbation = 0.0;

  void validate() const;
};

enum class Termination { converged, max_iters, stalled };
std::string to_string(Termination t);

struct SolveReport {
  LatticeMap map;
  /// Energy of the starting point followed by every accepted iterate.
  std::vector<double> energies;
  double grad_norm = 0.0;
  int iterations = 0;
  Termination reason = Termination::converged;
};

SolveReport minimize(const LatticeMap& u0, const KernelMatrix& K, const TargetManifold& m,
                     const FractionalOrder& order, const SolverOptions& opts);

/// h-weighted L2 norm of the tangential part of the L2 gradient density
/// (gradient / h): zero exactly at discrete critical points.
double el_residual(const LatticeMap& u, const KernelMatrix& K, const TargetManifold& m,
                   const FractionalOrder& order);

struct FlipReport {
  /// Energy change of flipping each interior cell, in grid order.
  std::vector<double> delta;
  std::size_t best_cell = 0;
  double best_delta = 0.0;
};

/// Energy change of u_i -> -u_i for every interior cell of a {-1, +1}-valued
/// map, computed from the quadratic form in O(n) per cell. Throws WrongTarget
/// when u is not {-1, +1}-valued.
FlipReport flip_search(const LatticeMap& u, const KernelMatrix& K, const FractionalOrder& order);

enum class InitKind { exterior_jump, geodesic, random };

/// Fills the interior of `exterior` (whose exterior cells and tails hold the
/// exterior condition):
///   exterior_jump - each interior cell copies the nearer window-edge
///                   exterior value;
///   geodesic      - sphere targets: minimal geodesic between the two edge
///                   values (a fixed great circle when they are antipodal);
///   random        - seeded random points of N.
LatticeMap initial_map(const LatticeMap& exterior, const TargetManifold& m, InitKind kind,
                       std::uint64_t seed = 0);

}  // namespace fracmaps

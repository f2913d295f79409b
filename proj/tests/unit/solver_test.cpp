#include <cmath>

#include <gtest/gtest.h>

#include "fracmaps/analysis.hpp"
#include "fracmaps/errors.hpp"
#include "fracmaps/solver.hpp"

using namespace fracmaps;

namespace {

AmbientPoint vec(double a, double b) {
  AmbientPoint p(2);
  p << a, b;
  return p;
}

AmbientPoint scalar(double a) { return AmbientPoint::Constant(1, a); }

}  // namespace

TEST(SolverOptions, Validation) {
  SolverOptions o;
  EXPECT_NO_THROW(o.validate());
  o.armijo_c = 1.0;
  EXPECT_THROW(o.validate(), InvalidArgument);
  o = {};
  o.backtrack = 0.0;
  EXPECT_THROW(o.validate(), InvalidArgument);
  o = {};
  o.grad_tol = 0.0;
  EXPECT_THROW(o.validate(), InvalidArgument);
}

TEST(Minimize, ConstantExteriorGivesConstantMap) {
  const FractionalOrder o(0.25);
  const LineGrid g(Interval(-1.0, 1.0), 0.125, 2.0);
  const KernelMatrix K = assemble(g, o);
  const Sphere S(2);
  const LatticeMap init = initial_map(constant_map(g, vec(0, 1)), S, InitKind::random, 3);
  const SolveReport rep = minimize(init, K, S, o, {});
  EXPECT_EQ(rep.reason, Termination::converged);
  EXPECT_LE(rep.energies.back(), 1e-12);
  for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
    EXPECT_NEAR(rep.map.value(i)[1], 1.0, 1e-6);
  }
}

TEST(Minimize, JumpExteriorOnCircleDescendsBelowTheJump) {
  const FractionalOrder o(0.25);
  const LineGrid g(Interval(-1.0, 1.0), 1.0 / 32, 2.0);
  const KernelMatrix K = assemble(g, o);
  const Sphere S(2);
  const LatticeMap jump = jump_map(g, vec(1, 0), vec(-1, 0));
  SolverOptions opts;
  opts.perturbation = 1e-3;
  opts.seed = 7;
  const SolveReport rep = minimize(jump, K, S, o, opts);
  EXPECT_EQ(rep.reason, Termination::converged);
  const double e_jump = 16.0 * std::sqrt(2.0) * gamma_s(o);
  const double e = localized_energy(rep.map, Interval(-1.0, 1.0), K, o);
  EXPECT_LT(e, e_jump - 0.1);
  // Regression value of the converged run.
  EXPECT_NEAR(e, 3.4026531781, 1e-7);
  for (std::size_t k = 1; k < rep.energies.size(); ++k) {
    EXPECT_LT(rep.energies[k], rep.energies[k - 1]);
  }
  EXPECT_TRUE(rep.map.on_manifold(S, 1e-12));
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.is_interior(i)) EXPECT_EQ(rep.map.value(i), jump.value(i));
  }
  EXPECT_LE(el_residual(rep.map, K, S, o), opts.grad_tol);
  EXPECT_DOUBLE_EQ(rep.grad_norm, el_residual(rep.map, K, S, o));
}

TEST(Minimize, AntipodalJumpIsACriticalPointWithoutPerturbation) {
  const FractionalOrder o(0.25);
  const LineGrid g(Interval(-1.0, 1.0), 0.125, 2.0);
  const KernelMatrix K = assemble(g, o);
  const Sphere S(2);
  const LatticeMap jump = jump_map(g, vec(1, 0), vec(-1, 0));
  EXPECT_EQ(el_residual(jump, K, S, o), 0.0);
  const SolveReport rep = minimize(jump, K, S, o, {});
  EXPECT_EQ(rep.iterations, 0);
  EXPECT_EQ(rep.reason, Termination::converged);
}

TEST(ElResidual, PositiveForNonAntipodalJump) {
  const FractionalOrder o(0.25);
  const LineGrid g(Interval(-1.0, 1.0), 0.125, 2.0);
  const KernelMatrix K = assemble(g, o);
  const Sphere S(2);
  const double c = std::cos(0.4), s = std::sin(0.4);
  const LatticeMap jump = jump_map(g, vec(c, s), vec(-c, s));
  EXPECT_GT(el_residual(jump, K, S, o), 1e-3);
  EXPECT_EQ(el_residual(constant_map(g, vec(c, s)), K, S, o), 0.0);
}

TEST(Minimize, MaxAdjacentJumpDecreasesUnderRefinement) {
  const FractionalOrder o(0.25);
  const Sphere S(2);
  double previous = INFINITY;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const LineGrid g(Interval(-1.0, 1.0), h, 2.0);
    SolverOptions opts;
    opts.perturbation = 1e-3;
    const SolveReport rep = minimize(jump_map(g, vec(1, 0), vec(-1, 0)), assemble(g, o), S, o, opts);
    const double mj = max_adjacent_jump(rep.map);
    EXPECT_LT(mj, previous) << h;
    previous = mj;
  }
}

TEST(Minimize, PointPairTerminatesAtTheJump) {
  const FractionalOrder o(0.25);
  const LineGrid g(Interval(-1.0, 1.0), 0.125, 2.0);
  const KernelMatrix K = assemble(g, o);
  const PointPair P;
  const LatticeMap jump = jump_map(g, scalar(1), scalar(-1));
  const SolveReport rep = minimize(jump, K, P, o, {});
  EXPECT_EQ(rep.reason, Termination::converged);
  EXPECT_EQ(rep.grad_norm, 0.0);
  EXPECT_EQ(rep.map.values(), jump.values());
}

TEST(Minimize, RejectsOffManifoldStart) {
  const FractionalOrder o(0.25);
  const LineGrid g(Interval(-1.0, 1.0), 0.25, 2.0);
  EXPECT_THROW(minimize(constant_map(g, vec(2, 0)), assemble(g, o), Sphere(2), o, {}), NotOnManifold);
}

TEST(Minimize, DeterministicForFixedSeed) {
  const FractionalOrder o(0.2);
  const LineGrid g(Interval(-1.0, 1.0), 0.0625, 2.0);
  const KernelMatrix K = assemble(g, o);
  const Sphere S(3);
  AmbientPoint a(3), b(3);
  a << 1, 0, 0;
  b << 0, 0, 1;
  const LatticeMap init = initial_map(jump_map(g, a, b), S, InitKind::random, 42);
  const SolveReport r1 = minimize(init, K, S, o, {});
  const SolveReport r2 = minimize(init, K, S, o, {});
  EXPECT_EQ(r1.map.values(), r2.map.values());
  EXPECT_EQ(r1.energies, r2.energies);
}

TEST(FlipSearch, JumpIsFlipStable) {
  for (double s : {0.1, 0.25}) {
    const FractionalOrder o(s);
    const LineGrid g(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
    const KernelMatrix K = assemble(g, o);
    const LatticeMap u = jump_map(g, scalar(1), scalar(-1));
    const FlipReport rep = flip_search(u, K, o);
    ASSERT_EQ(rep.delta.size(), g.interior_count());
    const std::size_t jump = *g.boundary_index(0.0);
    for (std::size_t k = 0; k < rep.delta.size(); ++k) {
      const std::size_t i = g.first_interior() + k;
      LatticeMap f = u;
      f.set_interior(i, -u.value(i));
      EXPECT_NEAR(energy(f, K, o) - energy(u, K, o), rep.delta[k], 1e-10);
      if (i == jump || i + 1 == jump) {
        // Moving the jump by one cell leaves the energy unchanged.
        EXPECT_LE(std::abs(rep.delta[k]), 1e-12) << i;
      } else {
        EXPECT_GT(rep.delta[k], 1e-6) << i;
      }
    }
    EXPECT_GE(rep.best_delta, -1e-12);
  }
}

TEST(FlipSearch, JumpEnergyIsIndependentOfItsPosition) {
  const FractionalOrder o(0.3);
  const LineGrid g(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
  const KernelMatrix K = assemble(g, o);
  const double centered = energy(jump_map(g, scalar(1), scalar(-1)), K, o);
  for (double c : {-0.75, -0.125, 0.5}) {
    LatticeMap u = jump_map(g, scalar(1), scalar(-1));
    for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
      u.set_interior(i, scalar(g.center(i) > c ? 1.0 : -1.0));
    }
    EXPECT_NEAR(energy(u, K, o), centered, 1e-12) << c;
  }
}

TEST(FlipSearch, FindsIsolatedWrongCell) {
  const FractionalOrder o(0.25);
  const LineGrid g(Interval(-1.0, 1.0), 0.125, 2.0);
  const KernelMatrix K = assemble(g, o);
  LatticeMap u = jump_map(g, scalar(1), scalar(-1));
  const std::size_t bad = g.first_interior() + 12;
  u.set_interior(bad, scalar(-1));
  const FlipReport rep = flip_search(u, K, o);
  EXPECT_EQ(rep.best_cell, bad);
  EXPECT_LT(rep.best_delta, 0.0);
  const FlipReport flat = flip_search(constant_map(g, scalar(1)), K, o);
  EXPECT_GT(flat.best_delta, 0.0);
}

TEST(FlipSearch, RejectsNonBinaryMaps) {
  const FractionalOrder o(0.25);
  const LineGrid g(Interval(-1.0, 1.0), 0.25, 2.0);
  EXPECT_THROW(flip_search(constant_map(g, vec(1, 0)), assemble(g, o), o), WrongTarget);
}

TEST(InitialMap, GeodesicStaysOnTheSphere) {
  const LineGrid g(Interval(-1.0, 1.0), 0.125, 2.0);
  const Sphere S(2);
  const LatticeMap u = initial_map(jump_map(g, vec(1, 0), vec(-1, 0)), S, InitKind::geodesic);
  EXPECT_TRUE(u.on_manifold(S, 1e-14));
  EXPECT_LT(max_adjacent_jump(u), 0.3);
  const LatticeMap c = initial_map(jump_map(g, vec(1, 0), vec(-1, 0)), S, InitKind::exterior_jump);
  EXPECT_EQ(c.values(), jump_map(g, vec(1, 0), vec(-1, 0)).values());
}

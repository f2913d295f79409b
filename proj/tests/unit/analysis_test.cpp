#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fracmaps/analysis.hpp"
#include "fracmaps/discrete_energy.hpp"
#include "fracmaps/errors.hpp"

using namespace fracmaps;

namespace {

AmbientPoint vec(double a, double b) {
  AmbientPoint p(2);
  p << a, b;
  return p;
}

}  // namespace

TEST(Rescale, IdentityAtUnitScale) {
  const LineGrid g(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N(0.0, 1.0);
  LatticeMap u = jump_map(g, vec(1, 0), vec(0, 1));
  for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) u.set_interior(i, vec(N(rng), N(rng)));
  const LatticeMap w = rescale(u, 0.0, 1.0, g);
  EXPECT_EQ(w.values(), u.values());
  EXPECT_EQ(w.tail_below(), u.tail_below());
  EXPECT_EQ(w.tail_above(), u.tail_above());
}

TEST(Rescale, JumpIsScaleInvariantAndCoverageIsChecked) {
  const LineGrid g(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
  const LatticeMap u = jump_map(g, vec(1, 0), vec(-1, 0));
  for (double rho : {0.5, 0.25, 0.125}) {
    const LatticeMap w = rescale(u, 0.0, rho, g);
    EXPECT_EQ(w.values(), u.values()) << rho;
  }
  EXPECT_THROW(rescale(u, 0.0, 2.0, g), CoverageExceeded);
  EXPECT_THROW(rescale(u, 0.5, 1.0, g), CoverageExceeded);
}

TEST(Rescale, GroupoidComposition) {
  const LineGrid src(Interval(-1.0, 1.0), 1.0 / 64, 4.0);
  const LineGrid ref(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> N(0.0, 1.0);
  LatticeMap u = jump_map(src, vec(1, 0), vec(0, 1));
  // Constant on blocks of width 1/4, so every stage maps breakpoints onto
  // reference cell boundaries.
  AmbientPoint block = vec(N(rng), N(rng));
  for (std::size_t i = src.first_interior(); i < src.end_interior(); ++i) {
    if ((i - src.first_interior()) % 16 == 0) block = vec(N(rng), N(rng));
    u.set_interior(i, block);
  }
  const LatticeMap once = rescale(u, 0.25, 0.25, ref);
  const LatticeMap twice = rescale(rescale(u, 0.25, 0.5, ref), 0.0, 0.5, ref);
  EXPECT_EQ(once.values(), twice.values());
  EXPECT_EQ(once.tail_below(), twice.tail_below());
  EXPECT_EQ(once.tail_above(), twice.tail_above());
}

TEST(Rescale, EnergyScalesWithTheOrder) {
  const FractionalOrder o(0.3);
  const LineGrid src(Interval(-1.0, 1.0), 1.0 / 32, 2.0);
  const LineGrid ref(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> N(0.0, 1.0);
  LatticeMap u = jump_map(src, vec(1, 0), vec(-1, 0));
  for (std::size_t i = src.first_interior(); i < src.end_interior(); ++i) u.set_interior(i, vec(N(rng), N(rng)));
  const double rho = 0.5;
  const LatticeMap w = rescale(u, 0.0, rho, ref);
  const double original = localized_energy(u, Interval(-0.5, 0.5), assemble(src, o), o);
  const double scaled = energy(w, assemble(ref, o), o);
  EXPECT_NEAR(scaled, std::pow(rho, 2.0 * 0.3 - 1.0) * original, 1e-10 * scaled);
}

TEST(TangentClassify, ConstantAndJump) {
  const LineGrid g(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
  const Sphere S(2);
  const std::vector<double> scales{0.5, 0.25, 0.125};
  const auto c = tangent_classify(blowup_sequence(constant_map(g, vec(0, 1)), 0.3, scales, g), S, 1e-6);
  EXPECT_EQ(c.kind, TangentKind::constant);
  EXPECT_NEAR(c.a[1], 1.0, 1e-15);
  const auto j = tangent_classify(blowup_sequence(jump_map(g, vec(1, 0), vec(-1, 0)), 0.0, scales, g), S, 1e-6);
  EXPECT_EQ(j.kind, TangentKind::jump);
  EXPECT_EQ(j.residual, 0.0);
  EXPECT_DOUBLE_EQ(j.a[0], 1.0);
  EXPECT_DOUBLE_EQ(j.b[0], -1.0);
  EXPECT_THROW(tangent_classify(blowup_sequence(constant_map(g, vec(0, 1)), 0.0, {0.5, 0.25}, g), S, 1e-6),
               InvalidArgument);
  EXPECT_THROW(blowup_sequence(constant_map(g, vec(0, 1)), 0.0, {0.25, 0.5}, g), InvalidArgument);
}

TEST(TangentClassify, OscillatingDataIsUnresolved) {
  const LineGrid g(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
  LatticeMap u = constant_map(g, vec(1, 0));
  for (std::size_t i = g.first_interior(); i < g.end_interior(); i += 2) u.set_interior(i, vec(0, 1));
  const auto t = tangent_classify(blowup_sequence(u, 0.0, {1.0, 0.9, 0.8}, g), Sphere(2), 1e-3);
  EXPECT_EQ(t.kind, TangentKind::unresolved);
}

TEST(SingularSet, ConstantAndJump) {
  const FractionalOrder o(0.25);
  const LineGrid g(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
  const HalfRectGrid hg(-1.25, 1.25, 0.25, 1.0 / 256, 1.0 / 256);
  const std::vector<double> radii{1.0 / 128, 1.0 / 64, 1.0 / 32};
  const double threshold = 0.5 * jump_density(4.0, o);

  const LatticeMap c = constant_map(g, vec(0, 1));
  const auto rc = singular_set(c, poisson_extend(c, hg, o), threshold, radii, o);
  EXPECT_TRUE(rc.flagged.empty());
  EXPECT_EQ(rc.points.size(), g.interior_count() - 1);

  const LatticeMap j = jump_map(g, vec(1, 0), vec(-1, 0));
  const auto rj = singular_set(j, poisson_extend(j, hg, o), threshold, radii, o);
  ASSERT_EQ(rj.flagged.size(), 1u);
  EXPECT_DOUBLE_EQ(rj.flagged[0], 0.0);
  EXPECT_THROW(singular_set(j, poisson_extend(j, hg, o), threshold, {1.0 / 128}, o), BadRadii);
}

TEST(Holder, JumpSmoothAndConstant) {
  const LineGrid g(Interval(-1.0, 1.0), 1.0 / 256, 2.0);
  const std::vector<double> radii{1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4};
  const auto j = holder_exponent(jump_map(g, vec(1, 0), vec(-1, 0)), 0.0, radii);
  EXPECT_NEAR(j.exponent, 0.0, 0.1);

  LatticeMap smooth = constant_map(g, vec(1, 0));
  for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
    const double x = g.center(i);
    smooth.set_interior(i, vec(std::cos(x), std::sin(x)));
  }
  const auto s = holder_exponent(smooth, 0.1, radii);
  EXPECT_NEAR(s.exponent, 1.0, 0.1);
  EXPECT_LT(s.fit_residual, 0.1);

  const auto c = holder_exponent(constant_map(g, vec(1, 0)), 0.0, radii);
  EXPECT_TRUE(c.constant);
  EXPECT_TRUE(std::isinf(c.exponent));

  EXPECT_THROW(holder_exponent(smooth, 0.0, {1.0 / 64, 1.0 / 32, 1.0 / 16}), InsufficientRadii);
  // The finest radius spans only 2 cells and is dropped.
  EXPECT_THROW(holder_exponent(smooth, 0.0, {1.0 / 256, 1.0 / 64, 1.0 / 32, 1.0 / 16}), InsufficientRadii);
}

TEST(Holder, MeanSquaredOscillationOfAJump) {
  const LineGrid g(Interval(-1.0, 1.0), 1.0 / 16, 2.0);
  const LatticeMap j = jump_map(g, vec(1, 0), vec(-1, 0));
  EXPECT_NEAR(mean_squared_oscillation(j, 0.0, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(mean_squared_oscillation(j, 0.0, 5.0), 1.0, 1e-15);
}

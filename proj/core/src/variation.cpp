#include "fracmaps/variation.hpp"

#include <cmath>
#include <numbers>

#include "fracmaps/errors.hpp"
#include "fracmaps/riesz_kernel.hpp"

namespace fracmaps {

JumpConfig::JumpConfig(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta >= 0.0) || !(std::abs(alpha * alpha + beta * beta - 1.0) <= 1e-14)) {
    throw InvalidArgument("jump configuration needs alpha > 0, beta >= 0, alpha^2 + beta^2 = 1");
  }
}

JumpConfig JumpConfig::from_angle(double theta) {
  if (!(theta >= 0.0 && theta < 0.5 * std::numbers::pi)) throw InvalidArgument("angle must lie in [0, pi/2)");
  return {std::cos(theta), std::sin(theta)};
}

VariationCoefficients variation_coefficients(const FractionalOrder& order) {
  const Interval unit(0.0, 1.0);
  VariationCoefficients c;
  c.I1 = kernel_mass(unit, Interval(-1.0, 0.0), order).value;
  c.I2 = kernel_mass(unit, Interval::above(1.0), order).value;
  c.I3 = kernel_mass(unit, Interval::below(-1.0), order).value;
  c.gamma = gamma_s(order);
  return c;
}

double competitor_energy(const JumpConfig& cfg, double t, const FractionalOrder& order) {
  const auto c = variation_coefficients(order);
  const Eigen::Vector2d a = cfg.a(), b = cfg.b(), as = cfg.a_star(), bs = cfg.b_star();
  const double q = 1.0 + t * t;
  const double r = std::sqrt(q);
  const double window = ((a - b) + t * (as - bs)).squaredNorm() / q;
  const double same_side = (((1.0 - r) * a + t * as).squaredNorm() +
                            ((1.0 - r) * b + t * bs).squaredNorm()) / q;
  const double cross = ((a + t * as - r * b).squaredNorm() +
                        (b + t * bs - r * a).squaredNorm()) / q;
  return c.gamma * (c.I1 * window + c.I2 * same_side + c.I3 * cross);
}

double first_variation_constant(const FractionalOrder& order) {
  const auto c = variation_coefficients(order);
  return 8.0 * c.gamma * (c.I1 + c.I3);
}

double first_variation(const JumpConfig& cfg, const FractionalOrder& order) {
  return -first_variation_constant(order) * cfg.alpha() * cfg.beta();
}

double second_variation_antipodal(const FractionalOrder& order) {
  const auto c = variation_coefficients(order);
  return -8.0 * c.gamma * c.I1 + 4.0 * c.gamma * c.I2 - 4.0 * c.gamma * c.I3;
}

LatticeMap competitor_lattice(const JumpConfig& cfg, double t, const LineGrid& grid) {
  if (!(grid.window() == Interval(-1.0, 1.0))) {
    throw InvalidArgument("competitor lattice needs the window (-1, 1)");
  }
  if (!grid.boundary_index(0.0)) throw InvalidArgument("grid must have a cell boundary at 0");
  const double r = std::sqrt(1.0 + t * t);
  const Eigen::Vector2d right = (cfg.a() + t * cfg.a_star()) / r;
  const Eigen::Vector2d left = (cfg.b() + t * cfg.b_star()) / r;
  LatticeMap u = jump_map(grid, cfg.a(), cfg.b());
  for (std::size_t i = grid.first_interior(); i < grid.end_interior(); ++i) {
    u.set_interior(i, grid.center(i) > 0.0 ? right : left);
  }
  return u;
}

StabilityRow stability_row(const JumpConfig& cfg, const FractionalOrder& order) {
  return {order.s(),
          cfg.alpha(),
          cfg.beta(),
          competitor_energy(cfg, 0.0, order),
          first_variation(cfg, order),
          second_variation_antipodal(order)};
}

}  // namespace fracmaps

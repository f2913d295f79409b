#pragma once

// Closed-form localized energy of the rotated competitor family around a
// two-value jump on the circle, and its first and second variations.
//
// The jump takes the value a = (alpha, beta) on (0, inf) and
// b = (-alpha, beta) on (-inf, 0). Inside (-1, 1) the competitor u_t rotates
// both values by the same angle toward a* = (-beta, alpha), b* = (beta, alpha):
//   u_t = (a + t a*) / sqrt(1 + t^2) on (0, 1),
//   u_t = (b + t b*) / sqrt(1 + t^2) on (-1, 0).

#include <Eigen/Core>

#include "fracmaps/fractional_order.hpp"
#include "fracmaps/line_grid.hpp"

namespace fracmaps {

class JumpConfig {
 public:
  /// Throws InvalidArgument unless alpha > 0, beta >= 0 and
  /// |alpha^2 + beta^2 - 1| <= 1e-14.
  JumpConfig(double alpha, double beta);
  /// alpha = cos(theta), beta = sin(theta), theta in [0, pi/2).
  static JumpConfig from_angle(double theta);
  static JumpConfig antipodal() { return {1.0, 0.0}; }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  Eigen::Vector2d a() const { return {alpha_, beta_}; }
  Eigen::Vector2d b() const { return {-alpha_, beta_}; }
  Eigen::Vector2d a_star() const { return {-beta_, alpha_}; }
  Eigen::Vector2d b_star() const { return {beta_, alpha_}; }

 private:
  double alpha_;
  double beta_;
};

struct VariationCoefficients {
  double I1 = 0.0;  // mass((0,1), (-1,0))
  double I2 = 0.0;  // mass((0,1), (1,inf))
  double I3 = 0.0;  // mass((0,1), (-inf,-1))
  double gamma = 0.0;
};

VariationCoefficients variation_coefficients(const FractionalOrder& order);

double competitor_energy(const JumpConfig& cfg, double t, const FractionalOrder& order);

/// d/dt competitor_energy at t = 0, equal to -C(s) alpha beta.
double first_variation(const JumpConfig& cfg, const FractionalOrder& order);

/// C(s) = 8 gamma (I1 + I3) > 0.
double first_variation_constant(const FractionalOrder& order);

/// -8 gamma I1 + 4 gamma I2 - 4 gamma I3 for a = (1,0), b = (-1,0).
double second_variation_antipodal(const FractionalOrder& order);

/// The competitor as a lattice map on a grid whose window is (-1, 1);
/// exterior cells and tails take the jump values.
LatticeMap competitor_lattice(const JumpConfig& cfg, double t, const LineGrid& grid);

struct StabilityRow {
  double s = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double energy = 0.0;            // competitor_energy at t = 0
  double first_variation = 0.0;
  double second_variation_antipodal = 0.0;
};

StabilityRow stability_row(const JumpConfig& cfg, const FractionalOrder& order);

}  // namespace fracmaps

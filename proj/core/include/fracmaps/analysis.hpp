#pragma once

// Blow-up diagnostics on computed maps: rescalings around a point,
// classification of the limiting profile, density-threshold detection of
// singular points and Campanato-style Hoelder exponent fits.

#include <optional>
#include <vector>

#include "fracmaps/cs_extension.hpp"
#include "fracmaps/line_grid.hpp"
#include "fracmaps/manifold.hpp"

namespace fracmaps {

/// u_{x0,rho}(x) = u(x0 + rho x) sampled at the cell centers of `ref`; the
/// tails take the value at the image of the centers of the virtual cells
/// just beyond +-R_ref. Exact when the images of reference cells are unions of
/// source cells. Throws CoverageExceeded unless the image of the reference
/// truncation interval lies inside the source truncation interval.
LatticeMap rescale(const LatticeMap& u, double x0, double rho, const LineGrid& ref);

/// Largest |u_{i+1} - u_i| over consecutive cells of the window, the two
/// window-edge pairs with the exterior included.
double max_adjacent_jump(const LatticeMap& u);

struct BlowupSequence {
  double center = 0.0;
  std::vector<double> scales;  // strictly decreasing, positive
  std::vector<LatticeMap> maps;
};

BlowupSequence blowup_sequence(const LatticeMap& u, double x0, const std::vector<double>& scales,
                               const LineGrid& ref);

enum class TangentKind { constant, jump, unresolved };

struct TangentClass {
  TangentKind kind = TangentKind::unresolved;
  AmbientPoint a;  // value on x > 0 (the constant for constant tangents)
  AmbientPoint b;  // value on x < 0
  double residual = 0.0;
};

/// Fits the finest rescaled map by the nearest two-constant model on the
/// reference window (half-line means projected to N). Throws InvalidArgument
/// with fewer than three scales.
TangentClass tangent_classify(const BlowupSequence& seq, const TargetManifold& m, double tol);

struct SingularSetReport {
  std::vector<double> points;
  std::vector<double> theta;  // extrapolated small-radius density per point
  double threshold = 0.0;
  std::vector<double> flagged;
};

/// Density at each probe point extrapolated linearly to r = 0 from its two
/// smallest reliable radii (at least 8 field cells across the half-disc).
/// Probe points default to the cell boundaries strictly inside the window,
/// the only places a piecewise-constant map can jump.
SingularSetReport singular_set(const LatticeMap& u, const ExtensionField& v, double threshold,
                               const std::vector<double>& probe_radii, const FractionalOrder& order,
                               const std::optional<std::vector<double>>& probe_points = std::nullopt);

struct HolderFit {
  double exponent = 0.0;
  double fit_residual = 0.0;  // rms of the log-log regression residuals
  bool constant = false;      // oscillation vanished: exponent reported as +inf
  std::vector<double> radii;  // radii that entered the fit
  std::vector<double> oscillation;
};

/// Mean-squared oscillation (1/2r) int_{x0-r}^{x0+r} |u - avg|^2, exact for
/// piecewise-constant maps.
double mean_squared_oscillation(const LatticeMap& u, double x0, double r);

/// Half the least-squares slope of log oscillation against log r. The
/// finest radius is dropped when fewer than 4 cells span it; fewer than four
/// remaining radii throws InsufficientRadii.
HolderFit holder_exponent(const LatticeMap& u, double x0, const std::vector<double>& radii);

}  // namespace fracmaps

#pragma once

// Lift of a line map to the upper half-plane through the degenerate-elliptic
// extension with weight y^a, a = 1 - 2s, together with weighted Dirichlet
// energies on half-discs, the scale-normalized density and the monotonicity
// deficit.

#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fracmaps/fractional_order.hpp"
#include "fracmaps/line_grid.hpp"

namespace fracmaps {

/// Uniform node grid x_i = x_lo + i dx (i = 0..nx), y_j = j dy (j = 0..ny).
/// Row j = 0 is the trace row: it carries the boundary values of the line
/// map and is not an extension node.
class HalfRectGrid {
 public:
  HalfRectGrid(double x_lo, double x_hi, double y_max, double dx, double dy);

  double x_lo() const noexcept { return x_lo_; }
  double x_hi() const noexcept { return x_hi_; }
  double y_max() const noexcept { return y_max_; }
  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t columns() const noexcept { return nx_ + 1; }
  std::size_t rows() const noexcept { return ny_ + 1; }
  std::size_t node_count() const noexcept { return columns() * rows(); }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * columns() + i; }
  double x(std::size_t i) const noexcept { return x_lo_ + static_cast<double>(i) * dx_; }
  double y(std::size_t j) const noexcept { return static_cast<double>(j) * dy_; }

  bool covers(double x0, double r) const noexcept;

  bool operator==(const HalfRectGrid&) const = default;

 private:
  double x_lo_, x_hi_, y_max_, dx_, dy_;
  std::size_t nx_ = 0, ny_ = 0;
};

enum class FieldProvenance { poisson_kernel, sampled };

/// Discontinuity of the boundary data: value jumps by `jump` across `at`.
struct TraceJump {
  double at = 0.0;
  Eigen::VectorXd jump;
};

struct ExtensionField {
  using Values = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  HalfRectGrid grid;
  /// One row per node in grid.index order, trace row included.
  Values values;
  FieldProvenance provenance = FieldProvenance::sampled;
  /// Largest |total kernel mass - 1| over the extension nodes (poisson_kernel
  /// provenance only).
  double mass_defect = 0.0;
  /// Boundary discontinuities, sorted by location (poisson_kernel only).
  /// Bottom-row cells touching one get the exact energy of the local jump
  /// profile added to the finite-difference energy of the remainder.
  std::vector<TraceJump> trace_jumps;

  int dim() const noexcept { return static_cast<int>(values.cols()); }
  Eigen::VectorXd at(std::size_t i, std::size_t j) const {
    return values.row(static_cast<Eigen::Index>(grid.index(i, j))).transpose();
  }
};

/// Kernel mass of the extension kernel at (x, y) carried by (-inf, t).
double kernel_mass_below(double x, double y, double t, const FractionalOrder& order);

/// Kernel mass of (t, inf): the extension of the unit step at t.
double step_extension(double x, double y, double t, const FractionalOrder& order);

/// Exact extension of a piecewise-constant lattice map. Consecutive cells
/// with equal values (tails included) are merged, and the kernel mass of each
/// piece comes from the angular distribution of the kernel in closed form.
/// Trace-row nodes lying on a discontinuity take the mean of both sides.
ExtensionField poisson_extend(const LatticeMap& u, const HalfRectGrid& grid,
                              const FractionalOrder& order);

/// Field sampled from a function; `f(x, 0)` fills the trace row.
ExtensionField sample_field(const HalfRectGrid& grid, int dim,
                            const std::function<Eigen::VectorXd(double, double)>& f);

/// Axis-aligned node region [x_lo, x_hi] x [y_lo, y_hi] for residual studies.
struct NodeRegion {
  double x_lo, x_hi, y_lo, y_hi;
};

/// Max over nodes of |div(y^a grad v)| discretized conservatively with
/// face weights. Without a region, all nodes with j >= 2 that have four
/// neighbours are used. Throws GridTooCoarse with fewer than 3 nodes per
/// direction.
double weighted_residual(const ExtensionField& v, const FractionalOrder& order,
                         const std::optional<NodeRegion>& region = std::nullopt);

/// (1/2) int_{B_r^+(x0)} y^a |grad v|^2. Throws RegionNotCovered.
double dirichlet_energy(const ExtensionField& v, double x0, double r, const FractionalOrder& order);

/// r^{2s-1} dirichlet_energy(v, x0, r).
double density(const ExtensionField& v, double x0, double r, const FractionalOrder& order);

struct DensityProfile {
  double center = 0.0;
  std::vector<double> radii;
  std::vector<double> theta;
};

DensityProfile density_profile(const ExtensionField& v, double x0, const std::vector<double>& radii,
                               const FractionalOrder& order);

struct MonotonicityDeficit {
  double lhs = 0.0;  // density(r) - density(rho)
  double rhs = 0.0;  // int over the half-annulus of y^a |X.grad v|^2 / |X|^{3-2s}
};

MonotonicityDeficit monotonicity_deficit(const ExtensionField& v, double x0, double rho, double r,
                                         const FractionalOrder& order);

/// Closed-form density of the extension of a two-value jump at its jump point.
double jump_density(double jump_size_squared, const FractionalOrder& order);

/// CSV with columns x, y, v_1..v_d (17 significant digits).
void write_field_csv(std::ostream& os, const ExtensionField& v);
/// CSV with columns r, theta (17 significant digits).
void write_profile_csv(std::ostream& os, const DensityProfile& p);

}  // namespace fracmaps

#pragma once

// Uniform partition of the truncated line (-R, R) into cells of width h with a
// window omega that is a union of cells, and piecewise-constant maps on it.

#include <cstddef>
#include <optional>

#include <Eigen/Core>

#include "fracmaps/manifold.hpp"
#include "fracmaps/riesz_kernel.hpp"

namespace fracmaps {

class LineGrid {
 public:
  /// h must divide the window and the two exterior strips (-R, x_l), (x_r, R);
  /// R > max(|x_l|, |x_r|).
  LineGrid(Interval window, double h, double truncation_radius);

  const Interval& window() const noexcept { return window_; }
  double h() const noexcept { return h_; }
  double truncation_radius() const noexcept { return radius_; }

  std::size_t size() const noexcept { return below_ + interior_ + above_; }
  std::size_t first_interior() const noexcept { return below_; }
  std::size_t interior_count() const noexcept { return interior_; }
  std::size_t end_interior() const noexcept { return below_ + interior_; }
  bool is_interior(std::size_t i) const noexcept {
    return i >= below_ && i < below_ + interior_;
  }

  double cell_lo(std::size_t i) const noexcept { return -radius_ + static_cast<double>(i) * h_; }
  double cell_hi(std::size_t i) const noexcept { return cell_lo(i + 1); }
  double center(std::size_t i) const noexcept { return cell_lo(i) + 0.5 * h_; }
  Interval cell(std::size_t i) const { return {cell_lo(i), cell_hi(i)}; }

  /// Index of the cell whose closure contains x, preferring the right cell at
  /// boundaries; nullopt outside [-R, R).
  std::optional<std::size_t> locate(double x) const noexcept;

  /// Index of the boundary (0..size()) equal to x, if x is a cell boundary up
  /// to a relative tolerance.
  std::optional<std::size_t> boundary_index(double x, double tol = 1e-10) const noexcept;

  /// Same grid scaled by lambda > 0.
  LineGrid dilated(double lambda) const;

  bool operator==(const LineGrid& other) const noexcept;

 private:
  Interval window_;
  double h_;
  double radius_;
  std::size_t below_ = 0;
  std::size_t interior_ = 0;
  std::size_t above_ = 0;
};

/// Piecewise-constant map on a LineGrid: one value per cell plus the constant
/// values on (-inf, -R] and [R, inf). Exterior cells and tails carry the
/// prescribed exterior condition.
class LatticeMap {
 public:
  using Values = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  LatticeMap(LineGrid grid, Values values, AmbientPoint tail_below,
             AmbientPoint tail_above);

  const LineGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return static_cast<int>(values_.cols()); }
  const Values& values() const noexcept { return values_; }
  AmbientPoint value(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)).transpose(); }
  const AmbientPoint& tail_below() const noexcept { return tail_below_; }
  const AmbientPoint& tail_above() const noexcept { return tail_above_; }

  /// Replaces one interior value; exterior data is immutable.
  void set_interior(std::size_t i, const AmbientPoint& v);

  /// Value at x (right-continuous at cell boundaries), tails included.
  AmbientPoint evaluate(double x) const;

  /// True when every cell and both tails lie on m within tol.
  bool on_manifold(const TargetManifold& m, double tol = 1e-12) const;

 private:
  LineGrid grid_;
  Values values_;
  AmbientPoint tail_below_;
  AmbientPoint tail_above_;
};

/// u = p everywhere.
LatticeMap constant_map(const LineGrid& grid, const AmbientPoint& p);

/// u = above for x > at, below for x < at; `at` must be a cell boundary.
LatticeMap jump_map(const LineGrid& grid, const AmbientPoint& above,
                    const AmbientPoint& below, double at = 0.0);

}  // namespace fracmaps

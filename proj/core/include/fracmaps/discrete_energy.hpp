#pragma once

// Exact fractional energy of piecewise-constant maps. Cell-pair and cell-tail
// kernel masses are assembled once; the energy is then a quadratic form in
// the cell values and has zero discretisation error on step functions.

#include <cstddef>

#include <Eigen/Core>

#include "fracmaps/fractional_order.hpp"
#include "fracmaps/line_grid.hpp"

namespace fracmaps {

struct KernelMatrix {
  LineGrid grid;
  FractionalOrder order;
  /// mass(i, j) = kernel mass of cells i and j; zero on the diagonal.
  Eigen::MatrixXd mass;
  /// Kernel mass of each cell against (-inf, -R] and [R, inf).
  Eigen::VectorXd tail_below;
  Eigen::VectorXd tail_above;
};

/// Dense assembly. The grid is uniform, so masses depend on |i - j| only and
/// n closed-form evaluations fill the matrix.
KernelMatrix assemble(const LineGrid& grid, const FractionalOrder& order);

/// Energy of u in the window of its grid: interior-interior pairs with weight
/// gamma_s / 2, interior-exterior pairs and the analytic tails with gamma_s.
double energy(const LatticeMap& u, const KernelMatrix& K, const FractionalOrder& order);

/// Euclidean gradient of energy() with respect to the interior values, one
/// row per interior cell (in grid order).
LatticeMap::Values energy_gradient(const LatticeMap& u, const KernelMatrix& K,
                                   const FractionalOrder& order);

/// Energy with the window replaced by `sub`, which must be a union of cells
/// inside the window. Cells outside `sub` act as exterior data.
double localized_energy(const LatticeMap& u, const Interval& sub, const KernelMatrix& K,
                        const FractionalOrder& order);

/// Energy with interior cells [first, last); building block of the above.
double energy_on_cells(const LatticeMap& u, std::size_t first, std::size_t last,
                       const KernelMatrix& K, const FractionalOrder& order);

}  // namespace fracmaps

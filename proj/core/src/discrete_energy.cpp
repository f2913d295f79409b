#include "fracmaps/discrete_energy.hpp"

#include <cmath>
#include <vector>

#include "fracmaps/errors.hpp"
#include "fracmaps/parallel.hpp"
#include "fracmaps/riesz_kernel.hpp"

namespace fracmaps {

namespace {

void check_compatible(const LatticeMap& u, const KernelMatrix& K,
                      const FractionalOrder& order) {
  if (!(u.grid() == K.grid)) throw GridMismatch("map and kernel matrix live on different grids");
  if (!(K.order == order)) throw GridMismatch("kernel matrix was assembled for another order");
}

double squared_distance(const LatticeMap::Values& v, Eigen::Index i, Eigen::Index j) {
  return (v.row(i) - v.row(j)).squaredNorm();
}

}  // namespace

KernelMatrix assemble(const LineGrid& grid, const FractionalOrder& order) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  std::vector<double> by_offset(static_cast<std::size_t>(n), 0.0);
  const Interval first = grid.cell(0);
  for (Eigen::Index k = 1; k < n; ++k) {
    by_offset[static_cast<std::size_t>(k)] =
        kernel_mass(first, grid.cell(static_cast<std::size_t>(k)), order).value;
  }
  KernelMatrix K{grid, order, Eigen::MatrixXd(n, n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      K.mass(i, j) = by_offset[static_cast<std::size_t>(std::abs(i - j))];
    }
  }
  const double R = grid.truncation_radius();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Interval c = grid.cell(static_cast<std::size_t>(i));
    K.tail_below(i) = kernel_mass(c, Interval::below(-R), order).value;
    K.tail_above(i) = kernel_mass(c, Interval::above(R), order).value;
  }
  return K;
}

double energy_on_cells(const LatticeMap& u, std::size_t first, std::size_t last,
                       const KernelMatrix& K, const FractionalOrder& order) {
  check_compatible(u, K, order);
  if (first > last || last > u.grid().size()) throw InvalidArgument("bad cell range");
  const auto& v = u.values();
  const auto n = static_cast<Eigen::Index>(u.grid().size());
  const auto lo = static_cast<Eigen::Index>(first);
  const auto hi = static_cast<Eigen::Index>(last);
  std::vector<double> rows(last - first, 0.0);
  parallel_for(last - first, [&](std::size_t r) {
    const Eigen::Index i = lo + static_cast<Eigen::Index>(r);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = (j >= lo && j < hi) ? 0.5 : 1.0;
      sum += w * K.mass(i, j) * squared_distance(v, i, j);
    }
    sum += K.tail_below(i) * (v.row(i).transpose() - u.tail_below()).squaredNorm();
    sum += K.tail_above(i) * (v.row(i).transpose() - u.tail_above()).squaredNorm();
    rows[r] = sum;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return gamma_s(order) * total;
}

double energy(const LatticeMap& u, const KernelMatrix& K, const FractionalOrder& order) {
  const auto& g = u.grid();
  return energy_on_cells(u, g.first_interior(), g.end_interior(), K, order);
}

double localized_energy(const LatticeMap& u, const Interval& sub, const KernelMatrix& K,
                        const FractionalOrder& order) {
  const auto& g = u.grid();
  const auto lo = g.boundary_index(sub.lo());
  const auto hi = g.boundary_index(sub.hi());
  if (!lo || !hi || *lo < g.first_interior() || *hi > g.end_interior()) {
    throw MisalignedSubwindow("sub-window must be a union of cells inside the window");
  }
  return energy_on_cells(u, *lo, *hi, K, order);
}

LatticeMap::Values energy_gradient(const LatticeMap& u, const KernelMatrix& K,
                                   const FractionalOrder& order) {
  check_compatible(u, K, order);
  const auto& g = u.grid();
  const auto& v = u.values();
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto first = static_cast<Eigen::Index>(g.first_interior());
  const double scale = 2.0 * gamma_s(order);
  LatticeMap::Values grad(static_cast<Eigen::Index>(g.interior_count()), v.cols());
  parallel_for(g.interior_count(), [&](std::size_t r) {
    const Eigen::Index i = first + static_cast<Eigen::Index>(r);
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(v.cols());
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      acc += K.mass(i, j) * (v.row(i) - v.row(j));
    }
    acc += K.tail_below(i) * (v.row(i) - u.tail_below().transpose());
    acc += K.tail_above(i) * (v.row(i) - u.tail_above().transpose());
    grad.row(static_cast<Eigen::Index>(r)) = scale * acc;
  });
  return grad;
}

}  // namespace fracmaps

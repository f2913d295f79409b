#include "fracmaps/cs_extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <boost/math/special_functions/beta.hpp>

#include "fracmaps/errors.hpp"
#include "fracmaps/format.hpp"
#include "fracmaps/parallel.hpp"
#include "fracmaps/quadrature.hpp"
#include "fracmaps/riesz_kernel.hpp"

namespace fracmaps {

namespace {

std::size_t checked_count(double span, double step, const char* what) {
  const double n = span / step;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
    throw InvalidArgument(std::string("spacing must divide the ") + what);
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

HalfRectGrid::HalfRectGrid(double x_lo, double x_hi, double y_max, double dx, double dy)
    : x_lo_(x_lo), x_hi_(x_hi), y_max_(y_max), dx_(dx), dy_(dy) {
  if (!(x_lo < x_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) {
    throw InvalidArgument("x-range must be a finite nonempty interval");
  }
  if (!(y_max > 0.0) || !std::isfinite(y_max)) throw InvalidArgument("y-range must be positive");
  if (!(dx > 0.0) || !(dy > 0.0)) throw InvalidArgument("grid spacings must be positive");
  nx_ = checked_count(x_hi - x_lo, dx, "x-range");
  ny_ = checked_count(y_max, dy, "y-range");
}

bool HalfRectGrid::covers(double x0, double r) const noexcept {
  const double tol = 1e-12 * std::max(1.0, std::abs(x0) + r);
  return r > 0.0 && x0 - r >= x_lo_ - tol && x0 + r <= x_hi_ + tol && r <= y_max_ + tol;
}

namespace {

// Kernel mass on the far side of t as seen from (x, y): the mass of
// (-inf, t) when t <= x, of (t, inf) when t > x. It equals
// (1/2) I_{sin^2 psi}(s, 1/2), psi being the angle between the segment to
// (t, 0) and the boundary line.
double far_side_mass(double x, double y, double t, double s) {
  const double d = x - t;
  const double y2 = y * y;
  const double z = y2 / (y2 + d * d);
  if (z >= 1.0) return 0.5;
  return 0.5 * boost::math::ibeta(s, 0.5, z);
}

struct Runs {
  std::vector<double> breaks;                // strictly increasing, finite
  std::vector<Eigen::VectorXd> values;       // breaks.size() + 1 entries
};

Runs merge_runs(const LatticeMap& u) {
  const auto& g = u.grid();
  Runs runs;
  runs.values.push_back(u.tail_below());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Eigen::VectorXd v = u.value(i);
    if (v != runs.values.back()) {
      runs.breaks.push_back(g.cell_lo(i));
      runs.values.push_back(std::move(v));
    }
  }
  if (u.tail_above() != runs.values.back()) {
    runs.breaks.push_back(g.cell_hi(g.size() - 1));
    runs.values.push_back(u.tail_above());
  }
  return runs;
}

Eigen::VectorXd trace_value(const Runs& runs, double x) {
  const auto it = std::lower_bound(runs.breaks.begin(), runs.breaks.end(), x);
  const auto k = static_cast<std::size_t>(it - runs.breaks.begin());
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  if (it != runs.breaks.end() && std::abs(*it - x) <= tol) {
    return 0.5 * (runs.values[k] + runs.values[k + 1]);
  }
  if (k > 0 && std::abs(runs.breaks[k - 1] - x) <= tol) {
    return 0.5 * (runs.values[k - 1] + runs.values[k]);
  }
  return runs.values[k];
}

}  // namespace

double kernel_mass_below(double x, double y, double t, const FractionalOrder& order) {
  if (!(y > 0.0)) throw InvalidArgument("kernel mass needs y > 0");
  const double q = far_side_mass(x, y, t, order.s());
  return t <= x ? q : 1.0 - q;
}

double step_extension(double x, double y, double t, const FractionalOrder& order) {
  if (y <= 0.0) return x > t ? 1.0 : (x < t ? 0.0 : 0.5);
  const double q = far_side_mass(x, y, t, order.s());
  return t <= x ? 1.0 - q : q;
}

namespace {

// Breakpoint positions in units of dx from x_lo when every breakpoint sits on
// a grid column line (up to rounding), so node-breakpoint offsets are integers.
std::optional<std::vector<long>> aligned_offsets(const std::vector<double>& breaks,
                                                 const HalfRectGrid& grid) {
  std::vector<long> out;
  out.reserve(breaks.size());
  for (double t : breaks) {
    const double k = (t - grid.x_lo()) / grid.dx();
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-9 * std::max(1.0, std::abs(k))) return std::nullopt;
    out.push_back(static_cast<long>(kr));
  }
  return out;
}

}  // namespace

ExtensionField poisson_extend(const LatticeMap& u, const HalfRectGrid& grid,
                              const FractionalOrder& order) {
  const Runs runs = merge_runs(u);
  const double s = order.s();
  const int d = u.dim();
  ExtensionField field{grid, ExtensionField::Values(static_cast<Eigen::Index>(grid.node_count()), d),
                       FieldProvenance::poisson_kernel, 0.0, {}};
  for (std::size_t k = 0; k < runs.breaks.size(); ++k) {
    field.trace_jumps.push_back({runs.breaks[k], runs.values[k + 1] - runs.values[k]});
  }
  for (std::size_t i = 0; i < grid.columns(); ++i) {
    field.values.row(static_cast<Eigen::Index>(grid.index(i, 0))) =
        trace_value(runs, grid.x(i)).transpose();
  }
  const std::size_t K = runs.breaks.size();
  const auto offsets = aligned_offsets(runs.breaks, grid);
  std::size_t max_offset = 0;
  if (offsets) {
    for (long k : *offsets) {
      max_offset = std::max(max_offset, static_cast<std::size_t>(std::abs(k)));
      max_offset = std::max(max_offset, static_cast<std::size_t>(std::abs(k - static_cast<long>(grid.nx()))));
    }
  }
  std::vector<double> row_defect(grid.rows(), 0.0);
  parallel_for(grid.ny(), [&](std::size_t jj) {
    const std::size_t j = jj + 1;
    const double y = grid.y(j);
    std::vector<double> q(K);
    std::vector<char> left(K);
    std::vector<double> cache;
    if (offsets) cache.assign(max_offset + 1, -1.0);
    for (std::size_t i = 0; i < grid.columns(); ++i) {
      const double x = grid.x(i);
      for (std::size_t k = 0; k < K; ++k) {
        if (offsets) {
          const long m = static_cast<long>(i) - (*offsets)[k];
          const auto am = static_cast<std::size_t>(std::abs(m));
          if (cache[am] < 0.0) cache[am] = far_side_mass(static_cast<double>(am) * grid.dx(), y, 0.0, s);
          q[k] = cache[am];
          left[k] = m >= 0;
        } else {
          q[k] = far_side_mass(x, y, runs.breaks[k], s);
          left[k] = runs.breaks[k] <= x;
        }
      }
      Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
      double total = 0.0;
      for (std::size_t k = 0; k <= K; ++k) {
        // Run k spans (breaks[k-1], breaks[k]) with infinite ends outside.
        const bool lo_left = k == 0 || left[k - 1];
        const bool hi_left = k < K && left[k];
        const double q_lo = k == 0 ? 0.0 : q[k - 1];
        const double q_hi = k == K ? 0.0 : q[k];
        double w;
        if (hi_left) {
          w = q_hi - q_lo;
        } else if (!lo_left) {
          w = q_lo - q_hi;
        } else {
          w = 1.0 - q_lo - q_hi;
        }
        v += w * runs.values[k];
        total += w;
      }
      field.values.row(static_cast<Eigen::Index>(grid.index(i, j))) = v.transpose();
      row_defect[j] = std::max(row_defect[j], std::abs(total - 1.0));
    }
  });
  field.mass_defect = *std::max_element(row_defect.begin(), row_defect.end());
  return field;
}

ExtensionField sample_field(const HalfRectGrid& grid, int dim,
                            const std::function<Eigen::VectorXd(double, double)>& f) {
  ExtensionField field{grid, ExtensionField::Values(static_cast<Eigen::Index>(grid.node_count()), dim),
                       FieldProvenance::sampled, 0.0, {}};
  for (std::size_t j = 0; j < grid.rows(); ++j) {
    for (std::size_t i = 0; i < grid.columns(); ++i) {
      const Eigen::VectorXd v = f(grid.x(i), grid.y(j));
      if (v.size() != dim) throw InvalidArgument("sampled value has the wrong dimension");
      field.values.row(static_cast<Eigen::Index>(grid.index(i, j))) = v.transpose();
    }
  }
  return field;
}

double weighted_residual(const ExtensionField& v, const FractionalOrder& order,
                         const std::optional<NodeRegion>& region) {
  const auto& g = v.grid;
  if (g.columns() < 3 || g.ny() < 3) throw GridTooCoarse("need at least 3 nodes per direction");
  const double a = order.weight_exponent();
  const double dx2 = g.dx() * g.dx();
  const double dy2 = g.dy() * g.dy();
  const double tol = 1e-9 * std::max(g.dx(), g.dy());
  std::vector<double> row_max(g.rows(), 0.0);
  bool any = false;
  for (std::size_t j = 2; j + 1 < g.rows(); ++j) {
    const double y = g.y(j);
    if (region && (y < region->y_lo - tol || y > region->y_hi + tol)) continue;
    for (std::size_t i = 1; i + 1 < g.columns(); ++i) {
      const double x = g.x(i);
      if (region && (x < region->x_lo - tol || x > region->x_hi + tol)) continue;
      any = true;
    }
  }
  if (!any) throw GridTooCoarse("no residual nodes inside the requested region");
  parallel_for(g.rows(), [&](std::size_t j) {
    if (j < 2 || j + 1 >= g.rows()) return;
    const double y = g.y(j);
    if (region && (y < region->y_lo - tol || y > region->y_hi + tol)) return;
    const double w_mid = std::pow(y, a);
    const double w_up = std::pow(0.5 * (y + g.y(j + 1)), a);
    const double w_dn = std::pow(0.5 * (y + g.y(j - 1)), a);
    for (std::size_t i = 1; i + 1 < g.columns(); ++i) {
      const double x = g.x(i);
      if (region && (x < region->x_lo - tol || x > region->x_hi + tol)) continue;
      const Eigen::VectorXd c = v.at(i, j);
      const Eigen::VectorXd r =
          w_mid * (v.at(i + 1, j) - 2.0 * c + v.at(i - 1, j)) / dx2 +
          (w_up * (v.at(i, j + 1) - c) - w_dn * (c - v.at(i, j - 1))) / dy2;
      row_max[j] = std::max(row_max[j], r.norm());
    }
  });
  return *std::max_element(row_max.begin(), row_max.end());
}

namespace {

// int over ([xa, xb] x [ya, yb]) intersected with the half-disc B_r^+(x0)
// of y^a dx dy.
double weighted_coverage(double xa, double xb, double ya, double yb, double x0, double r,
                         double a) {
  if (ya >= r) return 0.0;
  const double near_x = std::clamp(x0, xa, xb) - x0;
  if (near_x * near_x + ya * ya >= r * r) return 0.0;
  const double far_x = std::max(std::abs(xa - x0), std::abs(xb - x0));
  const double p = a + 1.0;
  if (far_x * far_x + yb * yb <= r * r) {
    return (xb - xa) * (std::pow(yb, p) - std::pow(ya, p)) / p;
  }
  const double top = std::min(yb, r);
  std::vector<double> cuts{ya, top};
  for (double xe : {xa - x0, xb - x0}) {
    const double c2 = r * r - xe * xe;
    if (c2 > 0.0) {
      const double yc = std::sqrt(c2);
      if (yc > ya && yc < top) cuts.push_back(yc);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  auto chord = [&](double y) {
    const double c = std::sqrt(std::max(r * r - y * y, 0.0));
    return std::max(0.0, std::min(xb, x0 + c) - std::max(xa, x0 - c));
  };
  // z = y^{a+1} absorbs the weight.
  auto integrand = [&](double z) { return chord(std::pow(z, 1.0 / p)) / p; };
  double total = 0.0;
  const double scale = (xb - xa) * (std::pow(yb, p) - std::pow(ya, p)) / p;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] <= cuts[k]) continue;
    const auto res = quad::integrate(integrand, std::pow(cuts[k], p), std::pow(cuts[k + 1], p),
                                     1e-13 * scale, 1e-11, 2000);
    total += res.value;
  }
  return total;
}

// Per-row constants of the y-model v = c0 + c1 y^{2s} inside a cell row.
struct RowModel {
  double eta_lo = 0.0, d_eta = 0.0;
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;  // int y^a lambda^k dy over the row
};

RowModel row_model(const HalfRectGrid& g, std::size_t j, const FractionalOrder& order) {
  const double s = order.s();
  const double a = order.weight_exponent();
  const double y0 = g.y(j), y1 = g.y(j + 1);
  RowModel m;
  m.eta_lo = std::pow(y0, 2.0 * s);
  m.d_eta = std::pow(y1, 2.0 * s) - m.eta_lo;
  if (j == 0) {
    m.m0 = std::pow(y1, a + 1.0) / (a + 1.0);
    m.m1 = 0.5 * y1 * y1 / m.d_eta;
    m.m2 = std::pow(y1, 2.0 + 2.0 * s) / (2.0 + 2.0 * s) / (m.d_eta * m.d_eta);
    return m;
  }
  auto lambda = [&](double y) { return (std::pow(y, 2.0 * s) - m.eta_lo) / m.d_eta; };
  m.m0 = (std::pow(y1, a + 1.0) - std::pow(y0, a + 1.0)) / (a + 1.0);
  m.m1 = quad::gk15([&](double y) { return std::pow(y, a) * lambda(y); }, y0, y1).value;
  m.m2 = quad::gk15([&](double y) { const double l = lambda(y); return std::pow(y, a) * l * l; },
                    y0, y1).value;
  return m;
}

struct CellRange {
  std::size_t i_lo, i_hi, j_hi;  // cells [i_lo, i_hi) x [0, j_hi)
};

CellRange cells_touching(const HalfRectGrid& g, double x0, double r) {
  const double lo = (x0 - r - g.x_lo()) / g.dx();
  const double hi = (x0 + r - g.x_lo()) / g.dx();
  const auto clampi = [&](double t) {
    return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(g.nx())));
  };
  return {clampi(std::floor(lo)), clampi(std::ceil(hi)),
          std::min(g.ny(), static_cast<std::size_t>(std::ceil(r / g.dy())))};
}

void require_covered(const ExtensionField& v, double x0, double r) {
  if (!v.grid.covers(x0, r)) throw RegionNotCovered("half-disc is not inside the field grid");
}

}  // namespace

namespace {

// Finite-difference energy (without the 1/2) of a cell with corner values
// bl, br, tl, tr under the row model.
double cell_energy(const Eigen::VectorXd& bl, const Eigen::VectorXd& br, const Eigen::VectorXd& tl,
                   const Eigen::VectorXd& tr, const RowModel& m, double dx, double s) {
  const Eigen::VectorXd db = br - bl, dt = tr - tl;
  const double horizontal = (db.squaredNorm() * (m.m0 - 2.0 * m.m1 + m.m2) +
                             2.0 * db.dot(dt) * (m.m1 - m.m2) + dt.squaredNorm() * m.m2) / dx;
  const double vertical =
      dx * 2.0 * s * 0.5 * ((tl - bl).squaredNorm() + (tr - br).squaredNorm()) / m.d_eta;
  return horizontal + vertical;
}

// int over [0, w] x [0, h] of y^a |grad mu|^2 / sigma^2 for the unit step
// extension mu with its discontinuity at the origin; in polar coordinates
// int_0^{pi/2} sin^{2s-1}(phi) rho_max(phi)^a / a dphi.
double corner_profile_integral(double w, double h, const FractionalOrder& order) {
  const double s = order.s();
  const double a = order.weight_exponent();
  const double split = std::atan2(h, w);
  auto rho_max = [&](double phi) { return std::min(w / std::cos(phi), h / std::sin(phi)); };
  // phi = t^{1/(2s)} removes the endpoint singularity sin^{2s-1}.
  auto near = [&](double t) {
    if (t <= 0.0) return std::pow(w, a) / (2.0 * s * a);
    const double phi = std::pow(t, 1.0 / (2.0 * s));
    return std::pow(std::sin(phi) / phi, 2.0 * s - 1.0) * std::pow(rho_max(phi), a) / (2.0 * s * a);
  };
  auto far = [&](double phi) {
    return std::pow(std::sin(phi), 2.0 * s - 1.0) * std::pow(rho_max(phi), a) / a;
  };
  const double scale = std::pow(std::max(w, h), a) / a;
  const auto lo = quad::integrate(near, 0.0, std::pow(split, 2.0 * s), 1e-14 * scale, 1e-12);
  const auto hi = quad::integrate(far, split, 0.5 * std::numbers::pi, 1e-14 * scale, 1e-12);
  return lo.value + hi.value;
}

double step_at(double x, double y, double t, double tol, const FractionalOrder& order) {
  if (y <= 0.0 && std::abs(x - t) <= tol) return 0.5;
  return step_extension(x, y, t, order);
}

}  // namespace

double dirichlet_energy(const ExtensionField& v, double x0, double r, const FractionalOrder& order) {
  require_covered(v, x0, r);
  const auto& g = v.grid;
  const double a = order.weight_exponent();
  const double s = order.s();
  const double dx = g.dx();
  const double sigma = sigma_s(order);
  const double tol = 1e-9 * dx;
  const CellRange cr = cells_touching(g, x0, r);
  const double q_full = v.trace_jumps.empty() ? 0.0 : corner_profile_integral(dx, g.dy(), order);
  std::vector<double> row_sum(cr.j_hi, 0.0);
  parallel_for(cr.j_hi, [&](std::size_t j) {
    const RowModel m = row_model(g, j, order);
    const double full = dx * m.m0;
    double acc = 0.0;
    for (std::size_t i = cr.i_lo; i < cr.i_hi; ++i) {
      const double xa = g.x(i), xb = g.x(i + 1);
      const double w = weighted_coverage(xa, xb, g.y(j), g.y(j + 1), x0, r, a);
      if (w <= 0.0) continue;
      Eigen::VectorXd bl = v.at(i, j), br = v.at(i + 1, j);
      Eigen::VectorXd tl = v.at(i, j + 1), tr = v.at(i + 1, j + 1);
      double singular = 0.0;
      if (j == 0 && !v.trace_jumps.empty()) {
        auto it = std::lower_bound(v.trace_jumps.begin(), v.trace_jumps.end(), xa - tol,
                                   [](const TraceJump& tj, double x) { return tj.at < x; });
        for (; it != v.trace_jumps.end() && it->at <= xb + tol; ++it) {
          const double t = it->at;
          const Eigen::VectorXd& J = it->jump;
          bl -= step_at(xa, 0.0, t, tol, order) * J;
          br -= step_at(xb, 0.0, t, tol, order) * J;
          tl -= step_at(xa, g.dy(), t, tol, order) * J;
          tr -= step_at(xb, g.dy(), t, tol, order) * J;
          double q = 0.0;
          for (double width : {t - xa, xb - t}) {
            if (width <= tol) continue;
            q += std::abs(width - dx) <= tol ? q_full : corner_profile_integral(width, g.dy(), order);
          }
          singular += sigma * sigma * J.squaredNorm() * q;
        }
      }
      acc += 0.5 * (cell_energy(bl, br, tl, tr, m, dx, s) + singular) * (w / full);
    }
    row_sum[j] = acc;
  });
  double total = 0.0;
  for (double t : row_sum) total += t;
  return total;
}

double density(const ExtensionField& v, double x0, double r, const FractionalOrder& order) {
  return std::pow(r, 2.0 * order.s() - 1.0) * dirichlet_energy(v, x0, r, order);
}

DensityProfile density_profile(const ExtensionField& v, double x0, const std::vector<double>& radii,
                               const FractionalOrder& order) {
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] > radii[k - 1]))) {
      throw BadRadii("radii must be positive and strictly increasing");
    }
  }
  DensityProfile p{x0, radii, {}};
  p.theta.reserve(radii.size());
  for (double r : radii) p.theta.push_back(density(v, x0, r, order));
  return p;
}

MonotonicityDeficit monotonicity_deficit(const ExtensionField& v, double x0, double rho, double r,
                                         const FractionalOrder& order) {
  if (!(rho > 0.0 && rho < r)) throw BadRadii("need 0 < rho < r");
  require_covered(v, x0, r);
  const auto& g = v.grid;
  const double a = order.weight_exponent();
  const double s = order.s();
  const double dx = g.dx();
  MonotonicityDeficit out;
  out.lhs = density(v, x0, r, order) - density(v, x0, rho, order);

  const CellRange cr = cells_touching(g, x0, r);
  std::vector<double> row_sum(cr.j_hi, 0.0);
  parallel_for(cr.j_hi, [&](std::size_t j) {
    const RowModel m = row_model(g, j, order);
    const double yc = 0.5 * (g.y(j) + g.y(j + 1));
    const double eta_c = std::pow(yc, 2.0 * s);
    const double lam = (eta_c - m.eta_lo) / m.d_eta;
    const double deta_dy = 2.0 * s * std::pow(yc, 2.0 * s - 1.0);
    double acc = 0.0;
    for (std::size_t i = cr.i_lo; i < cr.i_hi; ++i) {
      const double xa = g.x(i), xb = g.x(i + 1);
      const double w = weighted_coverage(xa, xb, g.y(j), g.y(j + 1), x0, r, a) -
                       weighted_coverage(xa, xb, g.y(j), g.y(j + 1), x0, rho, a);
      if (w <= 0.0) continue;
      const Eigen::VectorXd bl = v.at(i, j), br = v.at(i + 1, j);
      const Eigen::VectorXd tl = v.at(i, j + 1), tr = v.at(i + 1, j + 1);
      const Eigen::VectorXd gx = ((1.0 - lam) * (br - bl) + lam * (tr - tl)) / dx;
      const Eigen::VectorXd gy = 0.5 * ((tl - bl) + (tr - br)) / m.d_eta * deta_dy;
      const double px = 0.5 * (xa + xb) - x0;
      const double dist = std::hypot(px, yc);
      acc += w * (px * gx + yc * gy).squaredNorm() / std::pow(dist, 3.0 - 2.0 * s);
    }
    row_sum[j] = acc;
  });
  for (double t : row_sum) out.rhs += t;
  return out;
}

double jump_density(double jump_size_squared, const FractionalOrder& order) {
  return jump_size_squared * sigma_s(order) / (2.0 * order.weight_exponent());
}

void write_field_csv(std::ostream& os, const ExtensionField& v) {
  const auto& g = v.grid;
  os << "x,y";
  for (int k = 0; k < v.dim(); ++k) os << ",v_" << (k + 1);
  os << '\n';
  for (std::size_t j = 0; j < g.rows(); ++j) {
    for (std::size_t i = 0; i < g.columns(); ++i) {
      os << format_real(g.x(i)) << ',' << format_real(g.y(j));
      const auto row = v.values.row(static_cast<Eigen::Index>(g.index(i, j)));
      for (int k = 0; k < v.dim(); ++k) os << ',' << format_real(row(k));
      os << '\n';
    }
  }
}

void write_profile_csv(std::ostream& os, const DensityProfile& p) {
  os << "r,theta\n";
  for (std::size_t k = 0; k < p.radii.size(); ++k) {
    os << format_real(p.radii[k]) << ',' << format_real(p.theta[k]) << '\n';
  }
}

}  // namespace fracmaps

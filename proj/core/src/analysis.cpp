#include "fracmaps/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracmaps/errors.hpp"
#include "fracmaps/parallel.hpp"

namespace fracmaps {

LatticeMap rescale(const LatticeMap& u, double x0, double rho, const LineGrid& ref) {
  if (!(rho > 0.0)) throw InvalidArgument("scale must be positive");
  const double R_src = u.grid().truncation_radius();
  const double R_ref = ref.truncation_radius();
  const double tol = 1e-12 * std::max(1.0, R_src);
  if (x0 - rho * R_ref < -R_src - tol || x0 + rho * R_ref > R_src + tol) {
    throw CoverageExceeded("rescaled window leaves the source coverage");
  }
  LatticeMap::Values values(static_cast<Eigen::Index>(ref.size()), u.dim());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    values.row(static_cast<Eigen::Index>(i)) = u.evaluate(x0 + rho * ref.center(i)).transpose();
  }
  const double half = 0.5 * ref.h();
  return LatticeMap(ref, std::move(values), u.evaluate(x0 + rho * (-R_ref - half)),
                    u.evaluate(x0 + rho * (R_ref + half)));
}

BlowupSequence blowup_sequence(const LatticeMap& u, double x0, const std::vector<double>& scales,
                               const LineGrid& ref) {
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (!(scales[k] > 0.0) || (k > 0 && !(scales[k] < scales[k - 1]))) {
      throw InvalidArgument("scales must be positive and strictly decreasing");
    }
  }
  BlowupSequence seq{x0, scales, {}};
  seq.maps.reserve(scales.size());
  for (double rho : scales) seq.maps.push_back(rescale(u, x0, rho, ref));
  return seq;
}

double max_adjacent_jump(const LatticeMap& u) {
  const auto& g = u.grid();
  double m = 0.0;
  for (std::size_t i = g.first_interior(); i <= g.end_interior(); ++i) {
    m = std::max(m, (u.value(i) - u.value(i - 1)).norm());
  }
  return m;
}

TangentClass tangent_classify(const BlowupSequence& seq, const TargetManifold& m, double tol) {
  if (seq.maps.size() < 3) throw InvalidArgument("classification needs at least three scales");
  const LatticeMap& u = seq.maps.back();
  const auto& g = u.grid();
  AmbientPoint right = AmbientPoint::Zero(u.dim());
  AmbientPoint left = AmbientPoint::Zero(u.dim());
  double w_right = 0.0, w_left = 0.0;
  for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
    if (g.center(i) > 0.0) {
      right += u.value(i);
      w_right += 1.0;
    } else {
      left += u.value(i);
      w_left += 1.0;
    }
  }
  TangentClass out;
  if (w_right == 0.0 || w_left == 0.0) return out;
  try {
    out.a = m.project(right / w_right);
    out.b = m.project(left / w_left);
  } catch (const AmbiguousProjection&) {
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  double sq = 0.0;
  for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
    sq += (u.value(i) - (g.center(i) > 0.0 ? out.a : out.b)).squaredNorm();
  }
  out.residual = std::sqrt(sq / static_cast<double>(g.interior_count()));
  if (out.residual > tol) return out;
  if ((out.a - out.b).norm() <= tol) {
    out.kind = TangentKind::constant;
    out.a = m.project((right + left) / (w_right + w_left));
    out.b = out.a;
  } else {
    out.kind = TangentKind::jump;
  }
  return out;
}

SingularSetReport singular_set(const LatticeMap& u, const ExtensionField& v, double threshold,
                               const std::vector<double>& probe_radii, const FractionalOrder& order,
                               const std::optional<std::vector<double>>& probe_points) {
  if (!(threshold > 0.0)) throw InvalidArgument("threshold must be positive");
  std::vector<double> reliable;
  for (double r : probe_radii) {
    if (!(r > 0.0)) throw BadRadii("probe radii must be positive");
    if (2.0 * r / v.grid.dx() >= 8.0 - 1e-9) reliable.push_back(r);
  }
  std::sort(reliable.begin(), reliable.end());
  reliable.erase(std::unique(reliable.begin(), reliable.end()), reliable.end());
  if (reliable.size() < 2) throw BadRadii("need two radii spanning at least 8 field cells");
  const double r1 = reliable[0], r2 = reliable[1];

  SingularSetReport rep;
  rep.threshold = threshold;
  if (probe_points) {
    rep.points = *probe_points;
  } else {
    const auto& g = u.grid();
    for (std::size_t i = g.first_interior() + 1; i < g.end_interior(); ++i) rep.points.push_back(g.cell_lo(i));
  }
  for (double x : rep.points) {
    if (!v.grid.covers(x, r2)) throw RegionNotCovered("probe half-disc leaves the field grid");
  }
  rep.theta.assign(rep.points.size(), 0.0);
  parallel_for(rep.points.size(), [&](std::size_t k) {
    const double t1 = density(v, rep.points[k], r1, order);
    const double t2 = density(v, rep.points[k], r2, order);
    rep.theta[k] = std::max(0.0, t1 - r1 * (t2 - t1) / (r2 - r1));
  });
  for (std::size_t k = 0; k < rep.points.size(); ++k) {
    if (rep.theta[k] >= threshold) rep.flagged.push_back(rep.points[k]);
  }
  return rep;
}

double mean_squared_oscillation(const LatticeMap& u, double x0, double r) {
  if (!(r > 0.0)) throw BadRadii("radius must be positive");
  const auto& g = u.grid();
  const double lo = x0 - r, hi = x0 + r;
  std::vector<std::pair<double, AmbientPoint>> pieces;
  const double R = g.truncation_radius();
  if (lo < -R) pieces.emplace_back(std::min(hi, -R) - lo, u.tail_below());
  if (hi > R) pieces.emplace_back(hi - std::max(lo, R), u.tail_above());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double len = std::min(hi, g.cell_hi(i)) - std::max(lo, g.cell_lo(i));
    if (len > 0.0) pieces.emplace_back(len, u.value(i));
  }
  AmbientPoint avg = AmbientPoint::Zero(u.dim());
  for (const auto& [len, val] : pieces) avg += len * val;
  avg /= 2.0 * r;
  double sq = 0.0;
  for (const auto& [len, val] : pieces) sq += len * (val - avg).squaredNorm();
  return sq / (2.0 * r);
}

HolderFit holder_exponent(const LatticeMap& u, double x0, const std::vector<double>& radii) {
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end());
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (!(rs[k] > 0.0) || (k > 0 && !(rs[k] > rs[k - 1]))) {
      throw BadRadii("radii must be positive and distinct");
    }
  }
  if (!rs.empty() && 2.0 * rs.front() / u.grid().h() < 4.0) rs.erase(rs.begin());
  if (rs.size() < 4) throw InsufficientRadii("need at least four usable radii");

  HolderFit fit;
  std::vector<double> lx, ly;
  for (double r : rs) {
    const double mso = mean_squared_oscillation(u, x0, r);
    fit.radii.push_back(r);
    fit.oscillation.push_back(mso);
    if (mso > 1e-28) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(mso));
    }
  }
  if (lx.size() < 2) {
    fit.constant = true;
    fit.exponent = std::numeric_limits<double>::infinity();
    return fit;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  const double slope = sxy / sxx;
  double res = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    const double e = ly[k] - (my + slope * (lx[k] - mx));
    res += e * e;
  }
  fit.exponent = 0.5 * slope;
  fit.fit_residual = std::sqrt(res / n);
  return fit;
}

}  // namespace fracmaps

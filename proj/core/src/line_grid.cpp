#include "fracmaps/line_grid.hpp"

#include <cmath>

#include "fracmaps/errors.hpp"

namespace fracmaps {

namespace {

std::size_t whole_cells(double length, double h, const char* what) {
  const double ratio = length / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument(std::string("cell size must divide the ") + what);
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

LineGrid::LineGrid(Interval window, double h, double truncation_radius)
    : window_(window), h_(h), radius_(truncation_radius) {
  if (window.is_half_line()) throw InvalidArgument("window must be bounded");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("cell size must be positive");
  if (!(truncation_radius > std::max(std::abs(window.lo()), std::abs(window.hi())))) {
    throw InvalidArgument("truncation radius must lie beyond the window");
  }
  below_ = whole_cells(window.lo() + radius_, h, "strip below the window");
  interior_ = whole_cells(window.length(), h, "window");
  above_ = whole_cells(radius_ - window.hi(), h, "strip above the window");
}

std::optional<std::size_t> LineGrid::locate(double x) const noexcept {
  if (!(x >= -radius_) || !(x < radius_)) return std::nullopt;
  auto i = static_cast<std::size_t>(std::floor((x + radius_) / h_));
  if (i >= size()) i = size() - 1;
  // Correct for rounding in the division.
  if (x < cell_lo(i) && i > 0) --i;
  if (x >= cell_hi(i) && i + 1 < size()) ++i;
  return i;
}

std::optional<std::size_t> LineGrid::boundary_index(double x, double tol) const noexcept {
  const double k = (x + radius_) / h_;
  const double r = std::round(k);
  if (r < 0.0 || r > static_cast<double>(size())) return std::nullopt;
  if (std::abs(k - r) > tol * std::max(1.0, std::abs(k))) return std::nullopt;
  return static_cast<std::size_t>(r);
}

LineGrid LineGrid::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw InvalidArgument("dilation factor must be positive");
  return LineGrid(Interval(lambda * window_.lo(), lambda * window_.hi()), lambda * h_,
                  lambda * radius_);
}

bool LineGrid::operator==(const LineGrid& other) const noexcept {
  return window_ == other.window_ && h_ == other.h_ && radius_ == other.radius_;
}

LatticeMap::LatticeMap(LineGrid grid, Values values, AmbientPoint tail_below,
                       AmbientPoint tail_above)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      tail_below_(std::move(tail_below)),
      tail_above_(std::move(tail_above)) {
  if (static_cast<std::size_t>(values_.rows()) != grid_.size()) {
    throw InvalidArgument("lattice map needs one value per grid cell");
  }
  if (values_.cols() < 1 || tail_below_.size() != values_.cols() ||
      tail_above_.size() != values_.cols()) {
    throw InvalidArgument("lattice map values and tails must share a dimension");
  }
  if (!values_.allFinite() || !tail_below_.allFinite() || !tail_above_.allFinite()) {
    throw InvalidArgument("lattice map entries must be finite");
  }
}

void LatticeMap::set_interior(std::size_t i, const AmbientPoint& v) {
  if (!grid_.is_interior(i)) throw InvalidArgument("exterior values are fixed");
  if (v.size() != values_.cols()) throw InvalidArgument("value dimension mismatch");
  values_.row(static_cast<Eigen::Index>(i)) = v.transpose();
}

AmbientPoint LatticeMap::evaluate(double x) const {
  if (x < -grid_.truncation_radius()) return tail_below_;
  if (x >= grid_.truncation_radius()) return tail_above_;
  return value(*grid_.locate(x));
}

bool LatticeMap::on_manifold(const TargetManifold& m, double tol) const {
  if (dim() != m.ambient_dim()) return false;
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    if (m.dist(values_.row(i).transpose()) > tol) return false;
  }
  return m.dist(tail_below_) <= tol && m.dist(tail_above_) <= tol;
}

LatticeMap constant_map(const LineGrid& grid, const AmbientPoint& p) {
  LatticeMap::Values values(static_cast<Eigen::Index>(grid.size()), p.size());
  values.rowwise() = p.transpose();
  return LatticeMap(grid, std::move(values), p, p);
}

LatticeMap jump_map(const LineGrid& grid, const AmbientPoint& above,
                    const AmbientPoint& below, double at) {
  if (above.size() != below.size()) throw InvalidArgument("jump values differ in dimension");
  const auto k = grid.boundary_index(at);
  if (!k) throw InvalidArgument("jump location must be a cell boundary");
  LatticeMap::Values values(static_cast<Eigen::Index>(grid.size()), above.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values.row(static_cast<Eigen::Index>(i)) = (i < *k ? below : above).transpose();
  }
  return LatticeMap(grid, std::move(values), below, above);
}

}  // namespace fracmaps

#include "fracmaps/manifold.hpp"

#include <cmath>

#include "fracmaps/errors.hpp"

namespace fracmaps {

namespace {

constexpr double kOnManifoldTol = 1e-12;

void require_dim(const AmbientPoint& z, int dim) {
  if (z.size() != dim) {
    throw InvalidArgument("point has dimension " + std::to_string(z.size()) +
                          ", target lives in R^" + std::to_string(dim));
  }
}

}  // namespace

Sphere::Sphere(int ambient_dim) : dim_(ambient_dim) {
  if (ambient_dim < 2) throw InvalidArgument("sphere targets need ambient dimension >= 2");
}

std::string Sphere::name() const {
  return dim_ == 2 ? "circle" : "sphere" + std::to_string(dim_ - 1);
}

double Sphere::dist(const AmbientPoint& z) const {
  require_dim(z, dim_);
  return std::abs(z.norm() - 1.0);
}

AmbientPoint Sphere::project(const AmbientPoint& z) const {
  require_dim(z, dim_);
  const double n = z.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw AmbiguousProjection("projection onto the sphere is ambiguous at the origin");
  }
  return z / n;
}

AmbientPoint Sphere::tangent_project(const AmbientPoint& b, const AmbientPoint& w) const {
  require_dim(w, dim_);
  if (dist(b) > kOnManifoldTol) throw NotOnManifold("base point is not on the sphere");
  return w - w.dot(b) * b;
}

double PointPair::dist(const AmbientPoint& z) const {
  require_dim(z, 1);
  return std::abs(std::abs(z[0]) - 1.0);
}

AmbientPoint PointPair::project(const AmbientPoint& z) const {
  require_dim(z, 1);
  if (z[0] == 0.0 || std::isnan(z[0])) {
    throw AmbiguousProjection("projection onto {-1, +1} is ambiguous at 0");
  }
  return AmbientPoint::Constant(1, z[0] > 0.0 ? 1.0 : -1.0);
}

AmbientPoint PointPair::tangent_project(const AmbientPoint& b, const AmbientPoint& w) const {
  require_dim(w, 1);
  if (dist(b) > kOnManifoldTol) throw NotOnManifold("base point is not in {-1, +1}");
  return AmbientPoint::Zero(1);
}

std::shared_ptr<const TargetManifold> make_sphere(int ambient_dim) {
  return std::make_shared<const Sphere>(ambient_dim);
}

std::shared_ptr<const TargetManifold> make_point_pair() {
  return std::make_shared<const PointPair>();
}

}  // namespace fracmaps

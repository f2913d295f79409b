#pragma once

// Target manifolds N in R^d given through nearest-point projection, distance
// and tangent projector. Spheres and the two-point set {-1, +1} ship with the
// library; other smooth targets plug in by deriving from TargetManifold.

#include <memory>
#include <string>

#include <Eigen/Core>

namespace fracmaps {

using AmbientPoint = Eigen::VectorXd;

enum class TargetKind { sphere, point_pair, custom };

class TargetManifold {
 public:
  virtual ~TargetManifold() = default;

  virtual TargetKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual int ambient_dim() const = 0;
  virtual int intrinsic_dim() const = 0;

  /// Euclidean distance from z to N.
  virtual double dist(const AmbientPoint& z) const = 0;
  /// Unique nearest point of N; throws AmbiguousProjection on the ambiguity set.
  virtual AmbientPoint project(const AmbientPoint& z) const = 0;
  /// Orthogonal projection of w onto Tan(b, N); throws NotOnManifold.
  virtual AmbientPoint tangent_project(const AmbientPoint& b,
                                       const AmbientPoint& w) const = 0;

  bool contains(const AmbientPoint& z, double tol = 1e-12) const {
    return z.size() == ambient_dim() && dist(z) <= tol;
  }
};

/// Unit sphere S^{d-1} in R^d, d >= 2. Ambiguity set: the origin.
class Sphere final : public TargetManifold {
 public:
  explicit Sphere(int ambient_dim);

  TargetKind kind() const override { return TargetKind::sphere; }
  std::string name() const override;
  int ambient_dim() const override { return dim_; }
  int intrinsic_dim() const override { return dim_ - 1; }
  double dist(const AmbientPoint& z) const override;
  AmbientPoint project(const AmbientPoint& z) const override;
  AmbientPoint tangent_project(const AmbientPoint& b,
                               const AmbientPoint& w) const override;

 private:
  int dim_;
};

/// S^0 = {-1, +1} in R. Ambiguity set: {0}. Tangent spaces are trivial.
class PointPair final : public TargetManifold {
 public:
  TargetKind kind() const override { return TargetKind::point_pair; }
  std::string name() const override { return "point_pair"; }
  int ambient_dim() const override { return 1; }
  int intrinsic_dim() const override { return 0; }
  double dist(const AmbientPoint& z) const override;
  AmbientPoint project(const AmbientPoint& z) const override;
  AmbientPoint tangent_project(const AmbientPoint& b,
                               const AmbientPoint& w) const override;
};

std::shared_ptr<const TargetManifold> make_sphere(int ambient_dim);
inline std::shared_ptr<const TargetManifold> make_circle() { return make_sphere(2); }
std::shared_ptr<const TargetManifold> make_point_pair();

}  // namespace fracmaps

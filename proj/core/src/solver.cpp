#include "fracmaps/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fracmaps/errors.hpp"
#include "fracmaps/riesz_kernel.hpp"

namespace fracmaps {

void SolverOptions::validate() const {
  if (max_iters < 0) throw InvalidArgument("max_iters must be nonnegative");
  if (!(grad_tol > 0.0)) throw InvalidArgument("grad_tol must be positive");
  if (!(step0 > 0.0)) throw InvalidArgument("step0 must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw InvalidArgument("armijo_c must lie in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw InvalidArgument("backtrack must lie in (0, 1)");
  if (!(perturbation >= 0.0)) throw InvalidArgument("perturbation must be nonnegative");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::stalled: return "stalled";
  }
  return "unknown";
}

namespace {

// Descent direction -grad_N E / h per interior row and its h-weighted norm^2.
LatticeMap::Values riemannian_direction(const LatticeMap& u, const KernelMatrix& K,
                                        const TargetManifold& m, const FractionalOrder& order,
                                        double& norm2) {
  const auto& g = u.grid();
  LatticeMap::Values dir = energy_gradient(u, K, order);
  const double h = g.h();
  norm2 = 0.0;
  for (Eigen::Index r = 0; r < dir.rows(); ++r) {
    const auto i = g.first_interior() + static_cast<std::size_t>(r);
    AmbientPoint w = -dir.row(r).transpose() / h;
    AmbientPoint t = m.tangent_project(u.value(i), w);
    dir.row(r) = t.transpose();
    norm2 += h * t.squaredNorm();
  }
  return dir;
}

LatticeMap step(const LatticeMap& u, const LatticeMap::Values& dir, double eta,
                const TargetManifold& m) {
  LatticeMap next = u;
  const auto first = u.grid().first_interior();
  for (Eigen::Index r = 0; r < dir.rows(); ++r) {
    const auto i = first + static_cast<std::size_t>(r);
    next.set_interior(i, m.project(u.value(i) + eta * dir.row(r).transpose()));
  }
  return next;
}

}  // namespace

SolveReport minimize(const LatticeMap& u0, const KernelMatrix& K, const TargetManifold& m,
                     const FractionalOrder& order, const SolverOptions& opts) {
  opts.validate();
  if (!u0.on_manifold(m)) throw NotOnManifold("initial map must take values in the target");

  LatticeMap u = u0;
  const auto& g = u.grid();
  if (opts.perturbation > 0.0 && m.intrinsic_dim() > 0) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
      AmbientPoint xi(u.dim());
      for (Eigen::Index k = 0; k < xi.size(); ++k) xi[k] = normal(rng);
      const AmbientPoint b = u.value(i);
      u.set_interior(i, m.project(b + opts.perturbation * m.tangent_project(b, xi)));
    }
  }

  SolveReport report{u, {energy(u, K, order)}, 0.0, 0, Termination::converged};
  double E = report.energies.back();

  if (m.intrinsic_dim() == 0) {
    // Trivial tangent spaces: the Riemannian gradient vanishes identically.
    return report;
  }

  double eta = opts.step0;
  for (;;) {
    double norm2 = 0.0;
    const LatticeMap::Values dir = riemannian_direction(u, K, m, order, norm2);
    report.grad_norm = std::sqrt(norm2);
    if (report.grad_norm <= opts.grad_tol) {
      report.reason = Termination::converged;
      break;
    }
    if (report.iterations >= opts.max_iters) {
      report.reason = Termination::max_iters;
      break;
    }
    bool accepted = false;
    bool halved_for_projection = false;
    while (eta > 1e-18 * opts.step0) {
      LatticeMap trial = u;
      try {
        trial = step(u, dir, eta, m);
      } catch (const AmbiguousProjection&) {
        if (halved_for_projection) {
          throw ProjectionFailure("iterate hit the projection ambiguity set twice");
        }
        halved_for_projection = true;
        eta *= 0.5;
        continue;
      }
      const double Et = energy(trial, K, order);
      if (Et < E && Et <= E - opts.armijo_c * eta * norm2) {
        u = std::move(trial);
        E = Et;
        accepted = true;
        break;
      }
      eta *= opts.backtrack;
    }
    if (!accepted) {
      report.reason = Termination::stalled;
      break;
    }
    report.energies.push_back(E);
    ++report.iterations;
    eta /= opts.backtrack;
  }
  report.map = std::move(u);
  return report;
}

double el_residual(const LatticeMap& u, const KernelMatrix& K, const TargetManifold& m,
                   const FractionalOrder& order) {
  double norm2 = 0.0;
  riemannian_direction(u, K, m, order, norm2);
  return std::sqrt(norm2);
}

FlipReport flip_search(const LatticeMap& u, const KernelMatrix& K, const FractionalOrder& order) {
  if (u.dim() != 1 || !u.on_manifold(PointPair{})) {
    throw WrongTarget("flip search needs a {-1, +1}-valued map");
  }
  if (!(u.grid() == K.grid) || !(K.order == order)) throw GridMismatch("map and kernel differ");
  const auto& g = u.grid();
  const auto n = static_cast<Eigen::Index>(g.size());
  const double gamma = gamma_s(order);
  const auto& v = u.values();
  FlipReport out;
  out.delta.reserve(g.interior_count());
  for (std::size_t c = g.first_interior(); c < g.end_interior(); ++c) {
    const auto i = static_cast<Eigen::Index>(c);
    double field = K.tail_below(i) * u.tail_below()[0] + K.tail_above(i) * u.tail_above()[0];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) field += K.mass(i, j) * v(j, 0);
    }
    out.delta.push_back(4.0 * gamma * v(i, 0) * field);
  }
  for (std::size_t k = 0; k < out.delta.size(); ++k) {
    if (k == 0 || out.delta[k] < out.best_delta) {
      out.best_delta = out.delta[k];
      out.best_cell = g.first_interior() + k;
    }
  }
  return out;
}

namespace {

AmbientPoint edge_value_below(const LatticeMap& u) {
  const auto f = u.grid().first_interior();
  return f == 0 ? u.tail_below() : u.value(f - 1);
}

AmbientPoint edge_value_above(const LatticeMap& u) {
  const auto e = u.grid().end_interior();
  return e == u.grid().size() ? u.tail_above() : u.value(e);
}

// Unit vector orthogonal to p, built from the coordinate axis least aligned
// with p.
AmbientPoint orthogonal_direction(const AmbientPoint& p) {
  Eigen::Index axis = 0;
  p.cwiseAbs().minCoeff(&axis);
  AmbientPoint e = AmbientPoint::Zero(p.size());
  e[axis] = 1.0;
  e -= e.dot(p) * p;
  return e.normalized();
}

}  // namespace

LatticeMap initial_map(const LatticeMap& exterior, const TargetManifold& m, InitKind kind,
                       std::uint64_t seed) {
  if (exterior.dim() != m.ambient_dim()) throw InvalidArgument("exterior data dimension mismatch");
  LatticeMap u = exterior;
  const auto& g = u.grid();
  const AmbientPoint lo = edge_value_below(exterior);
  const AmbientPoint hi = edge_value_above(exterior);
  const double x_l = g.window().lo();
  const double width = g.window().length();

  if (kind == InitKind::geodesic && m.kind() != TargetKind::sphere) kind = InitKind::exterior_jump;

  switch (kind) {
    case InitKind::exterior_jump: {
      for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
        u.set_interior(i, g.center(i) < x_l + 0.5 * width ? lo : hi);
      }
      break;
    }
    case InitKind::geodesic: {
      const AmbientPoint p = m.project(lo);
      const AmbientPoint q = m.project(hi);
      const double cosine = std::clamp(p.dot(q), -1.0, 1.0);
      const double angle = std::acos(cosine);
      AmbientPoint e;
      if (angle < 1e-14) {
        e = AmbientPoint::Zero(p.size());
      } else if (std::numbers::pi - angle < 1e-12) {
        e = orthogonal_direction(p);
      } else {
        e = (q - cosine * p).normalized();
      }
      for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
        const double t = (g.center(i) - x_l) / width;
        u.set_interior(i, m.project(std::cos(t * angle) * p + std::sin(t * angle) * e));
      }
      break;
    }
    case InitKind::random: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (std::size_t i = g.first_interior(); i < g.end_interior(); ++i) {
        AmbientPoint z(u.dim());
        for (;;) {
          for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = normal(rng);
          if (z.norm() > 1e-8) break;
        }
        u.set_interior(i, m.project(z));
      }
      break;
    }
  }
  return u;
}

}  // namespace fracmaps

#pragma once

// Riesz-kernel masses over interval pairs and the normalisation constants of
// the fractional energy and of its half-plane extension.

#include <limits>

#include "fracmaps/fractional_order.hpp"

namespace fracmaps {

/// Open interval (lo, hi). At most one endpoint may be infinite.
class Interval {
 public:
  Interval(double lo, double hi);

  static Interval above(double lo) {
    return {lo, std::numeric_limits<double>::infinity()};
  }
  static Interval below(double hi) {
    return {-std::numeric_limits<double>::infinity(), hi};
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool is_half_line() const noexcept;
  double length() const noexcept { return hi_ - lo_; }

  bool operator==(const Interval&) const = default;

 private:
  double lo_;
  double hi_;
};

/// The double integral of |x - y|^{-1-2s} over I x J.
struct KernelMass {
  double value = 0.0;
};

/// Normalisation constant of the line energy:
/// s 2^{2s} pi^{-1/2} Gamma((1+2s)/2) / Gamma(1-s).
double gamma_s(const FractionalOrder& order);

/// Poisson-kernel constant pi^{-1/2} Gamma((1+2s)/2) / Gamma(s) of the
/// extension. This overload also accepts s = 1/2 (classical Poisson kernel).
double sigma_s(double s);
double sigma_s(const FractionalOrder& order);

/// Closed-form kernel mass. Interiors of I and J must be disjoint (a shared
/// endpoint is fine because 1 - 2s > 0); at most one of them may be a
/// half-line. Throws OverlappingIntervals / InvalidArgument.
KernelMass kernel_mass(const Interval& I, const Interval& J,
                       const FractionalOrder& order);

/// Independent numerical evaluation of the same double integral by adaptive
/// Gauss-Kronrod quadrature on logarithmically graded variables, with
/// truncated half-lines controlled by explicit tail bounds. `tol` is
/// relative. Throws NoConvergence if the refinement budget is exhausted.
double quadrature_oracle(const Interval& I, const Interval& J,
                         const FractionalOrder& order, double tol);

}  // namespace fracmaps

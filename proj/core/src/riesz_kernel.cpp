#include "fracmaps/riesz_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "fracmaps/errors.hpp"
#include "fracmaps/quadrature.hpp"

namespace fracmaps {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw InvalidArgument("interval requires lo < hi");
  }
  if (std::isinf(lo) && std::isinf(hi)) {
    throw InvalidArgument("interval may have at most one infinite endpoint");
  }
}

bool Interval::is_half_line() const noexcept {
  return std::isinf(lo_) || std::isinf(hi_);
}

double gamma_s(const FractionalOrder& order) {
  const double s = order.s();
  return s * std::exp2(2.0 * s) / std::sqrt(std::numbers::pi) *
         std::tgamma(0.5 + s) / std::tgamma(1.0 - s);
}

double sigma_s(double s) {
  if (!(s > 0.0) || !(s <= 0.5)) {
    throw InvalidArgument("sigma_s requires 0 < s <= 1/2");
  }
  return std::tgamma(0.5 + s) / (std::sqrt(std::numbers::pi) * std::tgamma(s));
}

double sigma_s(const FractionalOrder& order) { return sigma_s(order.s()); }

namespace {

struct OrderedPair {
  Interval left;
  Interval right;
};

OrderedPair order_pair(const Interval& I, const Interval& J) {
  if (I.is_half_line() && J.is_half_line()) {
    throw InvalidArgument("kernel mass of two half-lines is infinite");
  }
  if (I.hi() <= J.lo()) return {I, J};
  if (J.hi() <= I.lo()) return {J, I};
  throw OverlappingIntervals("kernel mass requires intervals with disjoint interiors");
}

// [(x + w)^q - x^q] / (p q) with q = 1 - p, evaluated without cancellation.
double increment(double x, double w, double p) {
  const double q = 1.0 - p;
  if (x == 0.0) return std::pow(w, q) / (p * q);
  return std::pow(x, q) * std::expm1(q * std::log1p(w / x)) / (p * q);
}

// Well-separated finite cells: even-order Taylor expansion of the second
// difference around the centre distance. Converges geometrically in
// ((w1 + w2) / 2 / D)^2.
double far_field(double distance, double half_sum, double half_diff, double p) {
  const double q = 1.0 - p;
  const double rs = half_sum / distance;
  const double rd = half_diff / distance;
  const double rs2 = rs * rs;
  const double rd2 = rd * rd;
  double binom = 1.0;  // C(q, n)
  double pow_s = 1.0, pow_d = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 80; ++k) {
    const int n = 2 * k;
    binom *= (q - (n - 2)) / (n - 1);
    binom *= (q - (n - 1)) / n;
    pow_s *= rs2;
    pow_d *= rd2;
    const double term = binom * (pow_d - pow_s);
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return 2.0 * std::pow(distance, q) * sum / (p * q);
}

}  // namespace

KernelMass kernel_mass(const Interval& I, const Interval& J,
                       const FractionalOrder& order) {
  const auto [left, right] = order_pair(I, J);
  const double p = 2.0 * order.s();
  const double gap = right.lo() - left.hi();
  if (std::isinf(right.hi())) return {increment(gap, left.length(), p)};
  if (std::isinf(left.lo())) return {increment(gap, right.length(), p)};

  const double w1 = left.length();
  const double w2 = right.length();
  const double half_sum = 0.5 * (w1 + w2);
  const double distance = gap + half_sum;
  if (half_sum < 0.25 * distance) {
    return {far_field(distance, half_sum, 0.5 * (w1 - w2), p)};
  }
  return {increment(gap, w1, p) - increment(gap + w2, w1, p)};
}

double quadrature_oracle(const Interval& I, const Interval& J,
                         const FractionalOrder& order, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("oracle tolerance must be positive");
  auto [left, right] = order_pair(I, J);
  if (std::isinf(left.lo())) {
    // Reflect x -> -x so that the half-line is always the inner variable.
    const Interval reflected_left(-right.hi(), -right.lo());
    right = Interval::above(-left.hi());
    left = reflected_left;
  }
  const double exponent = order.kernel_exponent();  // 1 + 2s
  const double c = right.lo();
  // Truncation bounds use inner_tol; the quadrature itself cannot resolve
  // relative errors much below a few ulps, hence the floor.
  const double inner_tol = 1e-3 * tol;
  const double inner_quad_tol = std::max(inner_tol, 1e-14);

  // Inner integral over y in J for a point x left of c at distance to_c.
  // Substituting y - x = to_c e^sigma gives the smooth integrand
  // to_c^{1-exponent} e^{(1 - exponent) sigma} on [0, log(1 + width/to_c)];
  // measuring sigma from the near end keeps tiny ranges exact.
  auto inner = [&](double to_c, double width) {
    double hi;
    if (std::isinf(width)) {
      // The tail beyond hi carries the fraction e^{-(exponent-1) hi}.
      hi = std::log(1.0 / inner_tol) / (exponent - 1.0);
    } else {
      hi = std::log1p(width / to_c);
    }
    auto f = [exponent](double sigma) { return std::exp((1.0 - exponent) * sigma); };
    const auto r = quad::integrate(f, 0.0, hi, 0.0, inner_quad_tol);
    if (!r.converged) throw NoConvergence("inner kernel integral did not converge");
    return std::pow(to_c, 1.0 - exponent) * r.value;
  };

  // Outer integral over x in the left interval, x = c - e^xi.
  const double width_right = right.length();
  auto outer = [&](double xi) {
    const double to_c = std::exp(xi);
    return inner(to_c, width_right) * to_c;
  };

  const double gap = c - left.hi();
  const double xi_hi = std::log(c - left.lo());
  double xi_lo;
  if (gap > 0.0) {
    xi_lo = std::log(gap);
  } else {
    // Shared endpoint: integrand behaves like e^{(2-exponent) xi} as
    // xi -> -inf, so the truncated piece is bounded by that exponential tail.
    xi_lo = xi_hi - std::log(1.0 / inner_tol) / (2.0 - exponent);
  }
  if (!(xi_lo < xi_hi)) throw NoConvergence("degenerate oracle range");
  const auto r = quad::integrate(outer, xi_lo, xi_hi, 0.0, std::max(0.1 * tol, 1e-14), 20000);
  if (!r.converged) throw NoConvergence("outer kernel integral did not converge");
  return r.value;
}

}  // namespace fracmaps

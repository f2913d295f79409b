#pragma once

// Adaptive Gauss-Kronrod (7/15) integration with global error control.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace fracmaps::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

namespace detail {
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace detail

/// One G7/K15 panel on [a, b]; error is |K15 - G7|.
template <class F>
Estimate gk15(F&& f, double a, double b) {
  using namespace detail;
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kKronrodNodes[k];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[k] * pair;
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * pair;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

/// Globally adaptive bisection: the panel with the largest error estimate is
/// split until the summed error is below max(abs_tol, rel_tol*|value|) or the
/// panel budget runs out (converged = false).
template <class F>
Result integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                 int max_panels = 4000) {
  struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
  };
  Result out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Panel> heap;
  const Estimate first = gk15(f, a, b);
  heap.push({a, b, first.value, first.error});
  double total = first.value;
  double error = first.error;
  int panels = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (panels >= max_panels) {
      out.value = total;
      out.error = error;
      out.panels = panels;
      out.converged = false;
      return out;
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Interval can no longer be split in floating point.
      heap.push({worst.lo, worst.hi, worst.value, 0.0});
      error -= worst.error;
      continue;
    }
    const Estimate left = gk15(f, worst.lo, mid);
    const Estimate right = gk15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push({worst.lo, mid, left.value, left.error});
    heap.push({mid, worst.hi, right.value, right.error});
    ++panels;
  }
  // Re-sum in a fixed order so the result does not carry drift from the
  // incremental updates above.
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(),
            [](const Panel& l, const Panel& r) { return l.lo < r.lo; });
  double value = 0.0, err = 0.0;
  for (const auto& p : all) {
    value += p.value;
    err += p.error;
  }
  out.value = value;
  out.error = err;
  out.panels = panels;
  out.converged = true;
  return out;
}

}  // namespace fracmaps::quad

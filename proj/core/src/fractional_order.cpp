#include "fracmaps/fractional_order.hpp"

#include <cmath>
#include <string>

#include "fracmaps/errors.hpp"

namespace fracmaps {

FractionalOrder::FractionalOrder(double s) : s_(s), weight_(1.0 - 2.0 * s) {
  if (!std::isfinite(s) || !(s > 0.0) || !(s < 0.5)) {
    throw InvalidArgument("fractional order must satisfy 0 < s < 1/2, got " +
                          std::to_string(s));
  }
}

}  // namespace fracmaps

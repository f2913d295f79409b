#pragma once

namespace fracmaps {

/// Order s of the fractional energy, restricted to the supercritical range
/// 0 < s < 1/2. Carries the derived weight exponent a = 1 - 2s of the
/// half-plane extension.
class FractionalOrder {
 public:
  explicit FractionalOrder(double s);

  double s() const noexcept { return s_; }
  /// a = 1 - 2s, in (0, 1).
  double weight_exponent() const noexcept { return weight_; }
  /// 1 + 2s, the decay exponent of the line kernel.
  double kernel_exponent() const noexcept { return 1.0 + 2.0 * s_; }

  bool operator==(const FractionalOrder&) const = default;

 private:
  double s_;
  double weight_;
};

}  // namespace fracmaps

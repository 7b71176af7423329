#ifndef LLGTW_STENCIL_HPP
#define LLGTW_STENCIL_HPP

#include <array>
#include <cstddef>
#include <string>

#include "llgtw/error.hpp"

namespace llgtw {

/// Central finite-difference stencil of even order 2..8 on a uniform mesh.
/// Weights are for unit spacing; divide by h (first) or h^2 (second).
struct Stencil {
  int order = 8;
  std::size_t radius = 4;
  std::array<double, 5> d1{};  // d1[k], k = 1..radius; antisymmetric
  std::array<double, 5> d2{};  // d2[k], k = 0..radius; symmetric

  static Stencil central(int order)
  {
    Stencil s;
    s.order = order;
    switch (order) {
      case 2:
        s.radius = 1;
        s.d1 = {0.0, 0.5};
        s.d2 = {-2.0, 1.0};
        break;
      case 4:
        s.radius = 2;
        s.d1 = {0.0, 2.0 / 3.0, -1.0 / 12.0};
        s.d2 = {-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
        break;
      case 6:
        s.radius = 3;
        s.d1 = {0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
        s.d2 = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
        break;
      case 8:
        s.radius = 4;
        s.d1 = {0.0, 4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
        s.d2 = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
        break;
      default:
        throw Error(ErrorKind::Config, "stencil order must be 2, 4, 6 or 8 (got " + std::to_string(order) + ")");
    }
    return s;
  }

  /// Weight of f[i + offset] in the first derivative at i (unit spacing).
  double first_weight(long offset) const
  {
    if (offset == 0) return 0.0;
    const auto k = static_cast<std::size_t>(offset < 0 ? -offset : offset);
    if (k > radius) return 0.0;
    return offset > 0 ? d1[k] : -d1[k];
  }

  double second_weight(long offset) const
  {
    const auto k = static_cast<std::size_t>(offset < 0 ? -offset : offset);
    return k > radius ? 0.0 : d2[k];
  }

  /// f'(x_i); `f` must be valid on [i - radius, i + radius].
  template <class Seq>
  double first(const Seq& f, std::size_t i, double h) const
  {
    double s = 0.0;
    for (std::size_t k = 1; k <= radius; ++k) s += d1[k] * (f[i + k] - f[i - k]);
    return s / h;
  }

  template <class Seq>
  double second(const Seq& f, std::size_t i, double h) const
  {
    double s = d2[0] * f[i];
    for (std::size_t k = 1; k <= radius; ++k) s += d2[k] * (f[i + k] + f[i - k]);
    return s / (h * h);
  }
};

inline constexpr int default_stencil_order = 8;

}  // namespace llgtw

#endif  // LLGTW_STENCIL_HPP

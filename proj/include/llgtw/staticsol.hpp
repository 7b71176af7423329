#ifndef LLGTW_STATICSOL_HPP
#define LLGTW_STATICSOL_HPP

// The two explicit static walls used as continuation base points:
// the Bloch wall (K2 > 0, zero field) and the transverse-field wall
// (K2 = 0, 0 < |H_perp| < 1).

#include <cmath>
#include <vector>

#include "llgtw/energetics.hpp"
#include "llgtw/model.hpp"

namespace llgtw {

/// Bloch wall m = (tanh xi, 0, sech xi), i.e. psi = pi/2, beta = 2 atan(exp(-xi)).
/// `center` translates the wall.
inline PolarProfile bloch_wall(const Grid& grid, double center = 0.0)
{
  PolarProfile p(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p.psi[i] = pi / 2;
    p.beta[i] = 2.0 * std::atan(std::exp(-(grid.xi(i) - center)));
  }
  p.minus = {pi / 2, pi};
  p.plus = {pi / 2, 0.0};
  return p;
}

/// beta_W'(xi) = -sech(xi).
inline double bloch_beta_prime(double xi) { return -1.0 / std::cosh(xi); }

namespace detail {

inline double transverse_rhs(double beta, double H3) { return H3 - std::sin(beta); }

inline double rk4_step(double beta, double dxi, double H3)
{
  const double k1 = transverse_rhs(beta, H3);
  const double k2 = transverse_rhs(beta + 0.5 * dxi * k1, H3);
  const double k3 = transverse_rhs(beta + 0.5 * dxi * k2, H3);
  const double k4 = transverse_rhs(beta + dxi * k3, H3);
  return beta + dxi / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline void check_transverse_field(double H3)
{
  if (!(H3 > 0.0 && H3 < 1.0)) {
    throw Error(ErrorKind::InvalidField, "transverse wall requires 0 < H3 < 1 (got " + std::to_string(H3) + ")");
  }
}

}  // namespace detail

inline constexpr int transverse_substeps = 16;

/// beta_T on the grid: beta' = H3 - sin(beta), beta(0) = pi/2, integrated
/// outward from the centre node with classical RK4.
inline std::vector<double> transverse_beta(double H3, const Grid& grid)
{
  detail::check_transverse_field(H3);
  std::vector<double> beta(grid.size());
  const std::size_t c = grid.center();
  const double dxi = grid.h() / transverse_substeps;
  beta[c] = pi / 2;
  double right = pi / 2, left = pi / 2;
  for (std::size_t k = 1; k <= c; ++k) {
    for (int s = 0; s < transverse_substeps; ++s) {
      right = detail::rk4_step(right, dxi, H3);
      left = detail::rk4_step(left, -dxi, H3);
    }
    beta[c + k] = right;
    beta[c - k] = left;
  }
  return beta;
}

/// Transverse-field wall for field H3 along z (H2 = 0).
inline PolarProfile transverse_wall(double H3, const Grid& grid)
{
  PolarProfile p(grid);
  p.beta = transverse_beta(H3, grid);
  const double b = std::asin(H3);
  p.minus = {pi / 2, pi - b};
  p.plus = {pi / 2, b};
  return p;
}

/// Grid with the same spacing whose half width is large enough that the
/// transverse wall is within `tail_tol` of its limits at both ends.
inline Grid grid_for_transverse(double H3, const Grid& grid, double tail_tol = 1e-8)
{
  detail::check_transverse_field(H3);
  const double target = std::asin(H3);
  const double dxi = grid.h() / transverse_substeps;
  double beta = pi / 2;
  std::size_t k = 0;
  // Symmetric: beta(-xi) = pi - beta(xi), so the right tail decides.
  while (std::abs(beta - target) >= tail_tol && k < 1000000) {
    for (int s = 0; s < transverse_substeps; ++s) beta = detail::rk4_step(beta, dxi, H3);
    ++k;
  }
  if (k <= grid.center()) return grid;
  return grid.extended(k - grid.center());
}

/// Base static profile of a regime. A transverse base with H2 != 0 is the
/// H2 = 0 wall rotated about the easy axis x.
inline PolarProfile static_profile(const Regime& regime, const Grid& grid)
{
  if (regime.kind == Regime::Kind::Walker) return bloch_wall(grid);
  const double h = regime.transverse_field();
  const double phi = std::atan2(regime.base.H2, regime.base.H3);
  if (phi == 0.0) return transverse_wall(h, grid);

  const auto bt = transverse_beta(h, grid);
  PolarProfile p(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 m{std::cos(bt[i]), std::sin(bt[i]) * std::sin(phi), std::sin(bt[i]) * std::cos(phi)};
    const Angles a = to_angles(m, pi / 2);
    p.psi[i] = a.psi;
    p.beta[i] = a.beta;
  }
  const auto eq = base_equilibria(regime);
  p.minus = eq.minus;
  p.plus = eq.plus;
  return p;
}

/// Analytic derivative of the base azimuth beta_*(xi) at the grid nodes.
inline std::vector<double> static_beta_prime(const Regime& regime, const Grid& grid)
{
  std::vector<double> d(grid.size());
  if (regime.kind == Regime::Kind::Walker) {
    for (std::size_t i = 0; i < grid.size(); ++i) d[i] = bloch_beta_prime(grid.xi(i));
    return d;
  }
  const double h = regime.transverse_field();
  const double phi = std::atan2(regime.base.H2, regime.base.H3);
  const double cphi = std::cos(phi);
  const auto bt = transverse_beta(h, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double bp = h - std::sin(bt[i]);
    const double cb = std::cos(bt[i]), sb = std::sin(bt[i]);
    d[i] = cphi * bp / (cb * cb + sb * sb * cphi * cphi);
  }
  return d;
}

}  // namespace llgtw

#endif  // LLGTW_STATICSOL_HPP

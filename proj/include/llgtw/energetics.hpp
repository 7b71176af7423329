#ifndef LLGTW_ENERGETICS_HPP
#define LLGTW_ENERGETICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "llgtw/model.hpp"
#include "llgtw/stencil.hpp"

namespace llgtw {

/// U(m) = 1/2 (1 - (m.x)^2 + K2 (m.y)^2 - 2 H.m) for a unit vector m.
inline double potential(const Vec3& m, const Params& p)
{
  if (std::abs(norm(m) - 1.0) > 1e-9) throw Error(ErrorKind::NonUnitVector, "potential requires |m| = 1");
  return 0.5 * (1.0 - m.x * m.x + p.K2 * m.y * m.y - 2.0 * dot(p.field(), m));
}

/// Ambient gradient of U: -(m.x) x + K2 (m.y) y - H.
inline Vec3 grad_potential(const Vec3& m, const Params& p)
{
  return {-m.x - p.H1, p.K2 * m.y - p.H2, -p.H3};
}

/// Tangential torques at polar angles (a, b):
///   F1 = -p.grad U,  F2 = n.grad U,
/// with n = dm/da = (cos a cos b, -sin a, cos a sin b) and p = m x n.
struct Torques {
  double F1 = 0.0;
  double F2 = 0.0;
};

inline Torques torques(double a, double b, const Params& p)
{
  const double sa = std::sin(a), ca = std::cos(a), sb = std::sin(b), cb = std::cos(b);
  Torques t;
  t.F1 = sa * cb * sb + p.H1 * sb - p.H3 * cb;
  t.F2 = -sa * ca * cb * cb - p.K2 * sa * ca - p.H1 * ca * cb + p.H2 * sa - p.H3 * ca * sb;
  return t;
}

/// Torques and their partial derivatives in (a, b).
struct TorqueJet {
  double F1, F2;
  double F1_a, F1_b, F2_a, F2_b;
};

inline TorqueJet torque_jet(double a, double b, const Params& p)
{
  const double sa = std::sin(a), ca = std::cos(a), sb = std::sin(b), cb = std::cos(b);
  const double c2a = ca * ca - sa * sa;
  const double c2b = cb * cb - sb * sb;
  TorqueJet j{};
  j.F1 = sa * cb * sb + p.H1 * sb - p.H3 * cb;
  j.F2 = -sa * ca * cb * cb - p.K2 * sa * ca - p.H1 * ca * cb + p.H2 * sa - p.H3 * ca * sb;
  j.F1_a = ca * cb * sb;
  j.F1_b = sa * c2b + p.H1 * cb + p.H3 * sb;
  j.F2_a = -c2a * cb * cb - p.K2 * c2a + p.H1 * sa * cb + p.H2 * ca + p.H3 * sa * sb;
  j.F2_b = 2.0 * sa * ca * cb * sb + p.H1 * ca * sb - p.H3 * ca * cb;
  return j;
}

// U as a function of the polar angles: dU/da = F2, dU/db = sin(a) F1.
inline double potential_polar(double a, double b, const Params& p) { return potential(direction(a, b), p); }

/// Lattice of directions padded with `r` ghost copies of the far-field values.
inline std::vector<Vec3> padded_directions(const std::vector<Vec3>& m, const Vec3& minus, const Vec3& plus,
                                           std::size_t r)
{
  std::vector<Vec3> out;
  out.reserve(m.size() + 2 * r);
  out.insert(out.end(), r, minus);
  out.insert(out.end(), m.begin(), m.end());
  out.insert(out.end(), r, plus);
  return out;
}

/// m'' by central differences with ghost nodes clamped to the far-field values.
inline std::vector<Vec3> laplacian(const std::vector<Vec3>& m, const Vec3& minus, const Vec3& plus, double h,
                                   const Stencil& st)
{
  const auto r = st.radius;
  const auto pad = padded_directions(m, minus, plus, r);
  const double inv_h2 = 1.0 / (h * h);
  std::vector<Vec3> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::size_t c = i + r;
    Vec3 s = st.d2[0] * pad[c];
    for (std::size_t k = 1; k <= r; ++k) s += st.d2[k] * (pad[c + k] + pad[c - k]);
    out[i] = inv_h2 * s;
  }
  return out;
}

/// H = m'' + (m.x) x - K2 (m.y) y + H_a at every node; ghosts hold the far-field values.
inline std::vector<Vec3> effective_field(const std::vector<Vec3>& m, const Vec3& minus, const Vec3& plus,
                                         const Params& p, double h,
                                         const Stencil& st = Stencil::central(default_stencil_order))
{
  auto H = laplacian(m, minus, plus, h, st);
  const Vec3 ha = p.field();
  for (std::size_t i = 0; i < m.size(); ++i) {
    H[i].x += m[i].x;
    H[i].y -= p.K2 * m[i].y;
    H[i] += ha;
  }
  return H;
}

inline std::vector<Vec3> effective_field(const PolarProfile& prof, const Params& p,
                                         const Stencil& st = Stencil::central(default_stencil_order))
{
  const auto c = to_cartesian(prof);
  return effective_field(c.m, direction(prof.minus), direction(prof.plus), p, prof.grid.h(), st);
}

/// Discrete micromagnetic energy relative to the right far-field state:
///   E = exchange + sum_i w_i (U(m_i) - U(m_plus)),  w_i trapezoid weights.
/// The exchange part is the discrete Dirichlet form -1/2 <m, D2 m> summed by
/// parts over the ghost-padded lattice; its gradient is exactly -h D2 m, so
/// the semi-discrete LLG flow dissipates this quantity.
inline double micromagnetic_energy(const std::vector<Vec3>& m, const Vec3& minus, const Vec3& plus,
                                   const Params& p, const Grid& grid,
                                   const Stencil& st = Stencil::central(default_stencil_order))
{
  const auto r = st.radius;
  const auto pad = padded_directions(m, minus, plus, r);
  const double h = grid.h();
  double exchange = 0.0;
  for (std::size_t j = 0; j + r < pad.size(); ++j) {
    for (std::size_t k = 1; k <= r; ++k) {
      const Vec3 d = pad[j + k] - pad[j];
      exchange += st.d2[k] * dot(d, d);
    }
  }
  // Each unordered pair appears once above; the symmetric double sum is twice that.
  exchange *= 2.0 / (4.0 * h);

  const double u_ref = potential(plus, p);
  double pot = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) pot += grid.weight(i) * (potential(m[i], p) - u_ref);
  return exchange + pot;
}

inline double micromagnetic_energy(const PolarProfile& prof, const Params& p,
                                   const Stencil& st = Stencil::central(default_stencil_order))
{
  const auto c = to_cartesian(prof);
  return micromagnetic_energy(c.m, direction(prof.minus), direction(prof.plus), p, prof.grid, st);
}

/// The two tail-to-tail far-field minima of U.
struct EquilibriumPair {
  Angles plus;
  Angles minus;
  double residual = 0.0;  // max |F1|, |F2| over both states
};

struct EquilibriumOptions {
  double torque_tol = 1e-12;
  int max_iter = 100;
  double hessian_tol = 1e-9;
};

namespace detail {

struct PolarHessian {
  double aa, ab, bb;
};

inline PolarHessian potential_hessian(double a, double b, const Params& p)
{
  const auto j = torque_jet(a, b, p);
  // U_a = F2, U_b = sin(a) F1
  return {j.F2_a, j.F2_b, std::sin(a) * j.F1_b};
}

// Smallest eigenvalue of the tangent-plane Hessian; the metric is diag(1, sin^2 a).
inline double tangent_min_eigenvalue(double a, double b, const Params& p)
{
  const auto H = potential_hessian(a, b, p);
  const double s = std::sin(a);
  const double xx = H.aa, xy = H.ab / s, yy = H.bb / (s * s);
  const double tr = 0.5 * (xx + yy);
  const double det = xx * yy - xy * xy;
  return tr - std::sqrt(std::max(0.0, tr * tr - det));
}

inline Angles minimize_on_sphere(Angles x, const Params& p, const EquilibriumOptions& opt)
{
  for (int it = 0; it < opt.max_iter; ++it) {
    const auto j = torque_jet(x.psi, x.beta, p);
    const double sa = std::sin(x.psi);
    const double ga = j.F2, gb = sa * j.F1;
    if (std::max(std::abs(j.F1), std::abs(j.F2)) < 0.05 * opt.torque_tol) return x;

    auto H = potential_hessian(x.psi, x.beta, p);
    // Shift the Hessian until positive definite so the step is a descent direction.
    double shift = 0.0;
    const double tr = 0.5 * (H.aa + H.bb);
    const double lmin = tr - std::sqrt(std::max(0.0, tr * tr - (H.aa * H.bb - H.ab * H.ab)));
    if (lmin < 1e-8) shift = 1e-8 - lmin + 1e-3;
    const double haa = H.aa + shift, hbb = H.bb + shift, hab = H.ab;
    const double det = haa * hbb - hab * hab;
    double da = -(hbb * ga - hab * gb) / det;
    double db = -(-hab * ga + haa * gb) / det;
    const double step_norm = std::hypot(da, db);
    if (step_norm > 0.5) {
      da *= 0.5 / step_norm;
      db *= 0.5 / step_norm;
    }

    const double g_dot_d = ga * da + gb * db;
    if (std::hypot(ga, gb) < 1e-6 && shift == 0.0) {
      x.psi += da;
      x.beta += db;
      continue;
    }
    const double u0 = potential_polar(x.psi, x.beta, p);
    double t = 1.0;
    for (int k = 0; k < 40; ++k) {
      const double a1 = x.psi + t * da, b1 = x.beta + t * db;
      if (a1 > 0.0 && a1 < pi && potential_polar(a1, b1, p) <= u0 + 1e-4 * t * g_dot_d) break;
      t *= 0.5;
    }
    x.psi += t * da;
    x.beta += t * db;
  }
  return x;
}

}  // namespace detail

/// Far-field states of the regime's base point.
inline EquilibriumPair base_equilibria(const Regime& regime)
{
  EquilibriumPair e;
  if (regime.kind == Regime::Kind::Walker) {
    e.plus = {pi / 2, 0.0};
    e.minus = {pi / 2, pi};
    return e;
  }
  // Transverse: solve in the frame rotated about x so that the field is along z.
  const double h = regime.transverse_field();
  const double phi = std::atan2(regime.base.H2, regime.base.H3);
  const double bp = std::asin(h), bm = pi - std::asin(h);
  const auto rotated = [phi](double beta) {
    return Vec3{std::cos(beta), std::sin(beta) * std::sin(phi), std::sin(beta) * std::cos(phi)};
  };
  e.plus = to_angles(rotated(bp), bp);
  e.minus = to_angles(rotated(bm), bm);
  return e;
}

/// Local minima of U seeded at `seed`, validated for tail-to-tail orientation.
inline EquilibriumPair equilibria(const Params& p, const EquilibriumPair& seed, const EquilibriumOptions& opt = {})
{
  EquilibriumPair e;
  e.plus = detail::minimize_on_sphere(seed.plus, p, opt);
  e.minus = detail::minimize_on_sphere(seed.minus, p, opt);

  double worst = 0.0;
  for (const Angles& s : {e.plus, e.minus}) {
    if (!(s.psi > 0.0 && s.psi < pi) || !std::isfinite(s.beta)) {
      throw Error(ErrorKind::NoEquilibrium, "equilibrium left the chart 0 < psi < pi");
    }
    const auto t = torques(s.psi, s.beta, p);
    worst = std::max({worst, std::abs(t.F1), std::abs(t.F2)});
    if (detail::tangent_min_eigenvalue(s.psi, s.beta, p) < -opt.hessian_tol) {
      throw Error(ErrorKind::NoEquilibrium, "converged point is not a local minimum of U");
    }
  }
  e.residual = worst;
  if (worst > opt.torque_tol) {
    throw Error(ErrorKind::NoEquilibrium, "torque residual " + std::to_string(worst) + " above tolerance");
  }
  const Vec3 mp = direction(e.plus), mm = direction(e.minus);
  if (norm(mp - mm) < 1e-6) throw Error(ErrorKind::NoEquilibrium, "the two minima merged");
  if (!(mp.x > 0.0 && mm.x < 0.0)) {
    throw Error(ErrorKind::WrongSign, "tail-to-tail condition x.m_plus > 0 > x.m_minus violated");
  }
  return e;
}

inline EquilibriumPair equilibria(const Params& p, const Regime& regime, const EquilibriumOptions& opt = {})
{
  return equilibria(p, base_equilibria(regime), opt);
}

/// Seeds chosen from the parameters alone: transverse-field seeds when
/// K2 = 0 and 0 < H2^2 + H3^2 < 1 with H3 > 0, otherwise +x and -x.
inline EquilibriumPair equilibria(const Params& p, const EquilibriumOptions& opt = {})
{
  const double ht = std::hypot(p.H2, p.H3);
  if (p.K2 == 0.0 && p.H3 > 0.0 && ht < 1.0) {
    return equilibria(p, base_equilibria(Regime::transverse(p.H2, p.H3, p.alpha)), opt);
  }
  return equilibria(p, base_equilibria(Regime::walker(1.0)), opt);
}

}  // namespace llgtw

#endif  // LLGTW_ENERGETICS_HPP

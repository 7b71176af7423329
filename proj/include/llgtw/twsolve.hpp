#ifndef LLGTW_TWSOLVE_HPP
#define LLGTW_TWSOLVE_HPP

// Travelling waves m(x - V t) written in polar form a = psi_ref + u,
// b = beta_ref + w about a reference profile that interpolates the base
// static wall and the far-field minima at the target parameters. The
// unknowns (u, w, V) solve G1 = G2 = 0 at the interior nodes together with
// the phase condition g = <b - beta_*, beta_*'> = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "llgtw/band_lu.hpp"
#include "llgtw/energetics.hpp"
#include "llgtw/model.hpp"
#include "llgtw/spectral.hpp"
#include "llgtw/staticsol.hpp"
#include "llgtw/stencil.hpp"

namespace llgtw {

/// C2 switch: 0 for xi <= 0, 1 for xi >= xi0, quintic smoothstep between.
struct SwitchingFunction {
  double xi0 = 1.0;

  double operator()(double xi) const
  {
    if (xi <= 0.0) return 0.0;
    if (xi >= xi0) return 1.0;
    const double t = xi / xi0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  }
};

/// Number of ghost nodes kept on each side of the reference profile; enough
/// for the widest supported stencil.
inline constexpr std::size_t reference_ghosts = 4;

struct ReferenceProfile {
  Grid grid;                  // working grid
  Regime regime;
  EquilibriumPair base;       // far-field states at the base point
  EquilibriumPair target;     // far-field states at the target parameters
  SwitchingFunction theta;
  std::vector<double> psi;    // reference on the grid extended by reference_ghosts
  std::vector<double> beta;
  std::vector<double> beta_static;        // beta_* on the working grid
  std::vector<double> beta_static_prime;  // analytic beta_*' on the working grid

  double psi_at(std::size_t i) const { return psi[i + reference_ghosts]; }
  double beta_at(std::size_t i) const { return beta[i + reference_ghosts]; }
};

/// psi^L(xi) = psi_*(xi) + Theta(xi)(psi_+^L - psi_+^*) + Theta(-xi)(psi_-^L - psi_-^*), same for beta.
inline ReferenceProfile reference_profile(const Params& params, const Regime& regime, const Grid& grid,
                                          const SwitchingFunction& theta = {},
                                          std::optional<EquilibriumPair> eq_seed = std::nullopt)
{
  ReferenceProfile ref{grid, regime, base_equilibria(regime), {}, theta, {}, {}, {}, {}};
  ref.target = equilibria(params, eq_seed ? *eq_seed : ref.base);

  const Grid ext = grid.extended(reference_ghosts);
  const PolarProfile base = static_profile(regime, ext);
  ref.psi.resize(ext.size());
  ref.beta.resize(ext.size());
  const double dpp = ref.target.plus.psi - ref.base.plus.psi;
  const double dpm = ref.target.minus.psi - ref.base.minus.psi;
  const double dbp = ref.target.plus.beta - ref.base.plus.beta;
  const double dbm = ref.target.minus.beta - ref.base.minus.beta;
  for (std::size_t e = 0; e < ext.size(); ++e) {
    const double x = ext.xi(e);
    const double tp = theta(x), tm = theta(-x);
    ref.psi[e] = base.psi[e] + tp * dpp + tm * dpm;
    ref.beta[e] = base.beta[e] + tp * dbp + tm * dbm;
  }
  ref.beta_static.assign(base.beta.begin() + reference_ghosts, base.beta.end() - reference_ghosts);
  ref.beta_static_prime = static_beta_prime(regime, grid);
  return ref;
}

/// Correction (u, w) on the full grid; the end values are held at zero.
struct Correction {
  std::vector<double> u;
  std::vector<double> w;

  explicit Correction(std::size_t n = 0) : u(n, 0.0), w(n, 0.0) {}
};

struct Residual {
  std::vector<double> G1;  // interior nodes 1..n-2
  std::vector<double> G2;
  double g = 0.0;
  double h = 1.0;

  /// sqrt(h sum G1^2 + h sum G2^2 + g^2).
  double norm() const
  {
    double s = 0.0;
    for (double v : G1) s += v * v;
    for (double v : G2) s += v * v;
    return std::sqrt(h * s + g * g);
  }
};

struct NewtonOptions {
  double tol_residual = 1e-10;
  int max_iter = 50;
  double min_step = 1.0 / 1024.0;     // line-search floor before declaring stagnation
  double armijo = 1e-4;
  double fd_step = 1e-7;              // finite-difference Jacobian step
  bool finite_difference_jacobian = false;
  int stencil_order = default_stencil_order;
  SwitchingFunction theta{};
};

namespace detail {

struct PolarJet {
  std::vector<double> a, b;  // padded with `ghost` values each side
  std::size_t ghost = 0;
};

inline PolarJet assemble_angles(const Correction& c, const ReferenceProfile& ref)
{
  PolarJet j;
  j.ghost = reference_ghosts;
  j.a = ref.psi;
  j.b = ref.beta;
  for (std::size_t i = 0; i < c.u.size(); ++i) {
    j.a[i + j.ghost] += c.u[i];
    j.b[i + j.ghost] += c.w[i];
  }
  for (std::size_t e = 0; e < j.a.size(); ++e) {
    if (!(j.a[e] > 0.0 && j.a[e] < pi)) {
      throw Error(ErrorKind::PolarSingularity, "a = psi_ref + u left (0, pi) at node " + std::to_string(e));
    }
  }
  return j;
}

struct NodeDerivs {
  double a, b, a1, b1, a2, b2;
};

inline NodeDerivs node_derivs(const PolarJet& j, std::size_t i, const Stencil& st, double h)
{
  const std::size_t e = i + j.ghost;
  return {j.a[e], j.b[e], st.first(j.a, e, h), st.first(j.b, e, h), st.second(j.a, e, h), st.second(j.b, e, h)};
}

}  // namespace detail

/// G1, G2 at the interior nodes and the phase condition g.
inline Residual residual(const Correction& c, double V, const Params& p, const ReferenceProfile& ref,
                         const Stencil& st = Stencil::central(default_stencil_order))
{
  const Grid& grid = ref.grid;
  const std::size_t n = grid.size();
  const double h = grid.h();
  const auto j = detail::assemble_angles(c, ref);
  Residual r;
  r.h = h;
  r.G1.resize(n - 2);
  r.G2.resize(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto d = detail::node_derivs(j, i, st, h);
    const double sa = std::sin(d.a), ca = std::cos(d.a);
    const auto t = torques(d.a, d.b, p);
    r.G1[i - 1] = sa * d.b2 + 2.0 * ca * d.a1 * d.b1 + V * d.a1 + p.alpha * V * sa * d.b1 - t.F1;
    r.G2[i - 1] = d.a2 - sa * ca * d.b1 * d.b1 + p.alpha * V * d.a1 - V * sa * d.b1 - t.F2;
  }
  double g = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g += grid.weight(i) * (j.b[i + j.ghost] - ref.beta_static[i]) * ref.beta_static_prime[i];
  }
  r.g = g;
  return r;
}

namespace detail {

inline std::size_t unknown_count(const Grid& g) { return 2 * (g.size() - 2) + 1; }

inline std::vector<double> pack(const Correction& c, double V)
{
  const std::size_t m = c.u.size() - 2;
  std::vector<double> x(2 * m + 1);
  for (std::size_t i = 1; i <= m; ++i) {
    x[2 * (i - 1)] = c.u[i];
    x[2 * (i - 1) + 1] = c.w[i];
  }
  x[2 * m] = V;
  return x;
}

inline void unpack(const std::vector<double>& x, Correction& c, double& V)
{
  const std::size_t m = c.u.size() - 2;
  for (std::size_t i = 1; i <= m; ++i) {
    c.u[i] = x[2 * (i - 1)];
    c.w[i] = x[2 * (i - 1) + 1];
  }
  c.u.front() = c.u.back() = 0.0;
  c.w.front() = c.w.back() = 0.0;
  V = x[2 * m];
}

inline std::vector<double> flatten(const Residual& r)
{
  std::vector<double> f(2 * r.G1.size() + 1);
  for (std::size_t i = 0; i < r.G1.size(); ++i) {
    f[2 * i] = r.G1[i];
    f[2 * i + 1] = r.G2[i];
  }
  f.back() = r.g;
  return f;
}

}  // namespace detail

/// Analytic Jacobian of (G1, G2, g) in the unknowns (u_i, w_i interleaved over
/// interior nodes, then V): a band of half-width 2 r + 1 plus the V column and
/// the phase-condition row.
inline BorderedMatrix jacobian(const Correction& c, double V, const Params& p, const ReferenceProfile& ref,
                               const Stencil& st = Stencil::central(default_stencil_order))
{
  const Grid& grid = ref.grid;
  const std::size_t n = grid.size(), m = n - 2;
  const double h = grid.h();
  const auto r = static_cast<long>(st.radius);
  const std::size_t bw = 2 * st.radius + 1;
  BorderedMatrix J(2 * m, bw, bw);
  const auto j = detail::assemble_angles(c, ref);

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto d = detail::node_derivs(j, i, st, h);
    const double sa = std::sin(d.a), ca = std::cos(d.a);
    const double c2a = ca * ca - sa * sa;
    const auto t = torque_jet(d.a, d.b, p);
    const std::size_t r1 = 2 * (i - 1), r2 = r1 + 1;

    for (long o = -r; o <= r; ++o) {
      const long jl = static_cast<long>(i) + o;
      if (jl < 1 || jl > static_cast<long>(m)) continue;
      const std::size_t cu = 2 * (static_cast<std::size_t>(jl) - 1), cw = cu + 1;
      const double w1 = st.first_weight(o) / h;
      const double w2 = st.second_weight(o) / (h * h);
      J.band(r1, cu) += w1 * (2.0 * ca * d.b1 + V);
      J.band(r1, cw) += w2 * sa + w1 * (2.0 * ca * d.a1 + p.alpha * V * sa);
      J.band(r2, cu) += w2 + w1 * p.alpha * V;
      J.band(r2, cw) += w1 * (-2.0 * sa * ca * d.b1 - V * sa);
    }
    J.band(r1, r1) += ca * d.b2 - 2.0 * sa * d.a1 * d.b1 + p.alpha * V * ca * d.b1 - t.F1_a;
    J.band(r1, r1 + 1) += -t.F1_b;
    J.band(r2, r1) += -c2a * d.b1 * d.b1 - V * ca * d.b1 - t.F2_a;
    J.band(r2, r1 + 1) += -t.F2_b;

    J.col[r1] = d.a1 + p.alpha * sa * d.b1;
    J.col[r2] = p.alpha * d.a1 - sa * d.b1;
    J.row[r1 + 1] = grid.weight(i) * ref.beta_static_prime[i];
  }
  J.corner = 0.0;
  return J;
}

/// Forward-difference Jacobian, dense, for cross-checking the analytic one.
inline std::vector<std::vector<double>> finite_difference_jacobian(const Correction& c, double V, const Params& p,
                                                                   const ReferenceProfile& ref, double step = 1e-7,
                                                                   const Stencil& st = Stencil::central(
                                                                       default_stencil_order))
{
  const auto x0 = detail::pack(c, V);
  const auto f0 = detail::flatten(residual(c, V, p, ref, st));
  const std::size_t N = x0.size();
  std::vector<std::vector<double>> J(N, std::vector<double>(N, 0.0));
  Correction cc = c;
  double vv = V;
  for (std::size_t k = 0; k < N; ++k) {
    auto x = x0;
    const double dx = step * std::max(1.0, std::abs(x0[k]));
    x[k] += dx;
    detail::unpack(x, cc, vv);
    const auto f = detail::flatten(residual(cc, vv, p, ref, st));
    for (std::size_t i = 0; i < N; ++i) J[i][k] = (f[i] - f0[i]) / dx;
  }
  return J;
}

namespace detail {

inline BorderedMatrix to_bordered(const std::vector<std::vector<double>>& dense, std::size_t bw)
{
  const std::size_t n = dense.size() - 1;
  BorderedMatrix B(n, bw, bw);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = B.band.row_begin(i); k < B.band.row_end(i); ++k) B.band(i, k) = dense[i][k];
    B.col[i] = dense[i][n];
    B.row[i] = dense[n][i];
  }
  B.corner = dense[n][n];
  return B;
}

}  // namespace detail

/// Corrections of a previous solution re-expressed about a new reference
/// profile built from the same base regime.
inline Correction correction_from_seed(const TWSolution& seed, const ReferenceProfile& ref)
{
  const Grid& grid = ref.grid;
  if (!(seed.profile.grid == grid)) {
    throw Error(ErrorKind::Config, "seed profile grid must match the solve grid");
  }
  Correction c(grid.size());
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double x = grid.xi(i);
    const double tp = ref.theta(x), tm = ref.theta(-x);
    const double psi_old = ref.psi_at(i) - tp * (ref.target.plus.psi - seed.profile.plus.psi) -
                           tm * (ref.target.minus.psi - seed.profile.minus.psi);
    const double beta_old = ref.beta_at(i) - tp * (ref.target.plus.beta - seed.profile.plus.beta) -
                            tm * (ref.target.minus.beta - seed.profile.minus.beta);
    c.u[i] = seed.profile.psi[i] - psi_old;
    c.w[i] = seed.profile.beta[i] - beta_old;
  }
  return c;
}

inline TWSolution assemble_solution(const Correction& c, double V, const Params& p, const ReferenceProfile& ref,
                                    double res_norm, int iterations)
{
  PolarProfile prof(ref.grid);
  for (std::size_t i = 0; i < ref.grid.size(); ++i) {
    prof.psi[i] = ref.psi_at(i) + c.u[i];
    prof.beta[i] = ref.beta_at(i) + c.w[i];
  }
  prof.minus = ref.target.minus;
  prof.plus = ref.target.plus;
  TWSolution s{prof, V, p, res_norm, ref.regime, iterations};
  return s;
}

/// Damped Newton on the travelling-wave system. Throws NoConvergence when the
/// iteration limit is hit or the line search stagnates.
inline TWSolution solve_tw(const Params& params, const Regime& regime, const Grid& grid,
                           const NewtonOptions& opts = {}, const std::optional<TWSolution>& seed = std::nullopt)
{
  validate(params, regime);
  const Stencil st = Stencil::central(opts.stencil_order);
  std::optional<EquilibriumPair> eq_seed;
  if (seed) eq_seed = EquilibriumPair{seed->profile.plus, seed->profile.minus, 0.0};
  const ReferenceProfile ref = reference_profile(params, regime, grid, opts.theta, eq_seed);

  Correction c(grid.size());
  double V = 0.0;
  if (seed) {
    c = correction_from_seed(*seed, ref);
    V = seed->V;
  }

  Residual r = residual(c, V, params, ref, st);
  double nrm = r.norm();
  for (int it = 0; it <= opts.max_iter; ++it) {
    if (nrm < opts.tol_residual) {
      auto sol = assemble_solution(c, V, params, ref, nrm, it);
      sol.profile.check();
      return sol;
    }
    if (it == opts.max_iter) break;

    const BorderedMatrix J = opts.finite_difference_jacobian
                                 ? detail::to_bordered(finite_difference_jacobian(c, V, params, ref, opts.fd_step, st),
                                                       2 * st.radius + 1)
                                 : jacobian(c, V, params, ref, st);
    auto rhs = detail::flatten(r);
    for (double& v : rhs) v = -v;
    const auto dx = BorderedSolver(J).solve(rhs);

    const auto x0 = detail::pack(c, V);
    double t = 1.0;
    bool accepted = false;
    while (t >= opts.min_step) {
      auto x = x0;
      for (std::size_t k = 0; k < x.size(); ++k) x[k] += t * dx[k];
      Correction ct = c;
      double Vt = V;
      detail::unpack(x, ct, Vt);
      try {
        Residual rt = residual(ct, Vt, params, ref, st);
        const double nt = rt.norm();
        if (std::isfinite(nt) && nt <= (1.0 - opts.armijo * t) * nrm) {
          c = std::move(ct);
          V = Vt;
          r = std::move(rt);
          nrm = nt;
          accepted = true;
          break;
        }
      }
      catch (const Error& e) {
        if (e.kind() != ErrorKind::PolarSingularity) throw;
      }
      t *= 0.5;
    }
    if (!accepted) {
      throw Error(ErrorKind::NoConvergence,
                  "line search stagnated at residual " + std::to_string(nrm) + " after " + std::to_string(it) +
                      " iterations");
    }
  }
  throw Error(ErrorKind::NoConvergence,
              "max_iter reached with residual " + std::to_string(nrm) + " > tol " + std::to_string(opts.tol_residual));
}

/// Integral of |m'|^2 over the grid (trapezoid, stencil derivatives, ghosts at the far-field values).
inline double exchange_integral(const PolarProfile& prof, const Stencil& st = Stencil::central(default_stencil_order))
{
  const auto c = to_cartesian(prof);
  const auto pad = padded_directions(c.m, direction(prof.minus), direction(prof.plus), st.radius);
  const double h = prof.grid.h();
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::size_t e = i + st.radius;
    Vec3 d{};
    for (std::size_t k = 1; k <= st.radius; ++k) d += st.d1[k] * (pad[e + k] - pad[e - k]);
    d *= 1.0 / h;
    s += prof.grid.weight(i) * dot(d, d);
  }
  return s;
}

/// Wave speed implied by the far-field energies and the profile:
///   V = (U(m_plus) - U(m_minus)) / (alpha int |m'|^2).
/// Obtained by dotting the travelling-wave equation with m x m' and
/// integrating; the wall moves so that the lower-energy domain grows.
inline double velocity_identity(const TWSolution& sol,
                                const Stencil& st = Stencil::central(default_stencil_order))
{
  const double du = potential(direction(sol.profile.plus), sol.params) -
                    potential(direction(sol.profile.minus), sol.params);
  return du / (sol.params.alpha * exchange_integral(sol.profile, st));
}

/// dV/d(H1, H2, H3, K2) at a converged solution from the tangent of the
/// solution branch: J dx/dlambda = -dG/dlambda, with dG/dlambda by central
/// differences (the reference profile is rebuilt at each shifted point).
inline std::array<double, 4> velocity_gradient(const TWSolution& sol, const Grid& grid,
                                               const NewtonOptions& opts = {}, double delta = 1e-6)
{
  const Stencil st = Stencil::central(opts.stencil_order);
  const EquilibriumPair eq{sol.profile.plus, sol.profile.minus, 0.0};
  const ReferenceProfile ref = reference_profile(sol.params, sol.regime, grid, opts.theta, eq);
  const Correction c = correction_from_seed(sol, ref);
  const BorderedSolver solver(jacobian(c, sol.V, sol.params, ref, st));

  std::array<double, 4> grad{};
  for (std::size_t k = 0; k < 4; ++k) {
    std::array<std::vector<double>, 2> f;
    for (int side = 0; side < 2; ++side) {
      Params p = sol.params;
      double* comp[4] = {&p.H1, &p.H2, &p.H3, &p.K2};
      *comp[k] += side == 0 ? delta : -delta;
      const ReferenceProfile rp = reference_profile(p, sol.regime, grid, opts.theta, eq);
      f[side] = detail::flatten(residual(c, sol.V, p, rp, st));
    }
    std::vector<double> rhs(f[0].size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -(f[0][i] - f[1][i]) / (2.0 * delta);
    grad[k] = solver.solve(rhs).back();
  }
  return grad;
}

struct ContinuationReport {
  bool completed = false;
  Params last_good;
  double last_fraction = 0.0;  // fraction of the start -> end segment reached
  int accepted_steps = 0;
  int rejected_steps = 0;
  std::string reason;
};

struct Branch {
  std::vector<TWSolution> solutions;
  ContinuationReport report;
};

/// Natural-parameter continuation along the straight segment start -> end.
/// Failed steps are bisected down to `step_floor` (in parameter distance);
/// below that the branch is declared ended at the last converged point.
inline Branch continue_branch(const Params& start, const Params& end, const Regime& regime, const Grid& grid,
                              int n_steps, const NewtonOptions& opts = {}, double step_floor = 1e-6)
{
  Branch br;
  br.report.last_good = start;
  try {
    br.solutions.push_back(solve_tw(start, regime, grid, opts));
  }
  catch (const Error& e) {
    br.report.reason = std::string("start point failed: ") + e.what();
    return br;
  }
  const double length = param_distance(start, end);
  if (length == 0.0 || n_steps <= 0) {
    br.report.completed = true;
    br.report.last_fraction = 1.0;
    br.report.reason = "zero-length path";
    return br;
  }
  const double nominal = 1.0 / n_steps;
  double t = 0.0, dt = nominal;
  while (t < 1.0) {
    const double t_try = std::min(1.0, t + dt);
    Params p = lerp(start, end, t_try);
    p.alpha = start.alpha;
    try {
      br.solutions.push_back(solve_tw(p, regime, grid, opts, br.solutions.back()));
      t = t_try;
      br.report.last_good = p;
      br.report.last_fraction = t;
      ++br.report.accepted_steps;
      dt = std::min(nominal, 2.0 * dt);
    }
    catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence && e.kind() != ErrorKind::NoEquilibrium &&
          e.kind() != ErrorKind::PolarSingularity && e.kind() != ErrorKind::WrongSign &&
          e.kind() != ErrorKind::InvalidProfile) {
        throw;
      }
      ++br.report.rejected_steps;
      dt *= 0.5;
      if (dt * length < step_floor) {
        br.report.reason = std::string("step fell below floor; last failure: ") + e.what();
        return br;
      }
    }
  }
  br.report.completed = true;
  br.report.reason = "reached end point";
  return br;
}

/// Linearization at a base static wall, assembled from the tridiagonal
/// Schrodinger operators (L, L + K2) or (M, N):
///   D(f1, f2, mu) = (-A f2 + alpha mu beta', -B f1 - mu beta', <beta', f2>).
/// Unknown and row ordering match `jacobian`.
inline BorderedMatrix linearized_operator(const Regime& regime, const Grid& grid, double alpha)
{
  regime.check();
  SchrodingerOp A, B;
  std::vector<double> bp;
  if (regime.kind == Regime::Kind::Walker) {
    A = potential_L(grid);
    B = A.shifted(regime.base.K2);
    bp = static_beta_prime(regime, grid);
  }
  else {
    if (regime.base.H2 != 0.0) throw Error(ErrorKind::InvalidRegime, "linearized_operator requires H2 = 0");
    A = potential_M(regime.base.H3, grid);
    B = potential_N(regime.base.H3, grid);
    bp = static_beta_prime(regime, grid);
  }
  const std::size_t m = A.size();
  BorderedMatrix D(2 * m, 3, 3);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t r1 = 2 * k, r2 = r1 + 1;
    D.band(r1, r1 + 1) = -A.diag(k);
    D.band(r2, r1) = -B.diag(k);
    if (k > 0) {
      D.band(r1, r1 - 1) = -A.off();
      D.band(r2, r1 - 2) = -B.off();
    }
    if (k + 1 < m) {
      D.band(r1, r1 + 3) = -A.off();
      D.band(r2, r1 + 2) = -B.off();
    }
    D.col[r1] = alpha * bp[k + 1];
    D.col[r2] = -bp[k + 1];
    D.row[r1 + 1] = grid.h() * bp[k + 1];
  }
  return D;
}

/// Smallest singular value of a bordered operator in the discrete norms
/// h sum f1^2 + h sum f2^2 + mu^2 on both sides, by inverse power iteration.
inline double smallest_singular_value(const BorderedMatrix& D, double h, int iterations = 60)
{
  const BorderedSolver solver(D);
  const std::size_t N = D.size();
  const double sh = std::sqrt(h);
  std::vector<double> v(N);
  for (std::size_t i = 0; i < N; ++i) v[i] = 1.0 + 0.3 * std::cos(0.71 * static_cast<double>(i));
  double sigma_inv = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double nv = 0.0;
    for (double x : v) nv += x * x;
    nv = std::sqrt(nv);
    for (double& x : v) x /= nv;
    // y = S D^-1 S^-1 v, then z = S^-1 D^-T S y, with S = diag(sqrt h, ..., 1).
    std::vector<double> x = v;
    for (std::size_t i = 0; i + 1 < N; ++i) x[i] /= sh;
    auto y = solver.solve(x);
    for (std::size_t i = 0; i + 1 < N; ++i) y[i] *= sh;
    double ny = 0.0;
    for (double q : y) ny += q * q;
    sigma_inv = std::sqrt(ny);
    for (std::size_t i = 0; i + 1 < N; ++i) y[i] *= sh;
    auto z = solver.solve_transposed(y);
    for (std::size_t i = 0; i + 1 < N; ++i) z[i] /= sh;
    v = std::move(z);
  }
  return 1.0 / sigma_inv;
}

}  // namespace llgtw

#endif  // LLGTW_TWSOLVE_HPP

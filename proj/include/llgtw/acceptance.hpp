#ifndef LLGTW_ACCEPTANCE_HPP
#define LLGTW_ACCEPTANCE_HPP

// Acceptance checks with pinned tolerances. Each check produces one report
// entry {name, expected, observed, tolerance, pass}; failures are entries,
// never exceptions.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "llgtw/dynamics.hpp"
#include "llgtw/energetics.hpp"
#include "llgtw/io.hpp"
#include "llgtw/spectral.hpp"
#include "llgtw/staticsol.hpp"
#include "llgtw/twsolve.hpp"

namespace llgtw {

struct CriterionResult {
  int id = 0;
  std::string name;
  nlohmann::json expected;
  nlohmann::json observed;
  nlohmann::json tolerance;
  bool pass = false;
  nlohmann::json details = nlohmann::json::array();
};

inline CriterionResult criterion(int id, std::string name)
{
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

struct AcceptanceOptions {
  Grid grid{20.0, 801};
  NewtonOptions newton{};
  std::uint64_t seed = 20240917;
  int trials = 200;
  double alpha = 0.1;
  double dynamics_T = 200.0;
};

inline AcceptanceOptions acceptance_options(const RunConfig& c)
{
  AcceptanceOptions o;
  o.grid = c.grid;
  o.newton = c.newton;
  o.seed = c.seed;
  o.trials = c.trials;
  return o;
}

namespace accept {

inline constexpr double static_residual_tol = 1e-6;
inline constexpr double kernel_tol = 1e-4;
inline constexpr double cosine_min = 0.999;
inline constexpr double gap_min = 0.2;
inline constexpr double rayleigh_tol = 1e-6;
inline constexpr double kernel_M_tol = 1e-3;
inline constexpr double identity_abs_tol = 1e-6;
inline constexpr double identity_rel_tol = 1e-6;
inline constexpr double zero_speed_tol = 1e-10;
inline constexpr double continuity_factor = 5.0;
inline constexpr double continuity_floor = 1e-12;
inline constexpr double mobility_tol = 0.03;
inline constexpr double dynamics_speed_tol = 0.02;
inline constexpr double energy_rise_tol = 1e-9;
inline constexpr double unit_tol = 1e-9;
inline constexpr double order_lo = 1.8, order_hi = 2.2;
inline constexpr double time_order_lo = 3.5, time_order_hi = 4.5;

struct LatticePoint {
  Params params;
  std::array<int, 4> index{};
  bool converged = false;
  std::string failure;
  double V = 0.0;
  double V_identity = 0.0;
  double residual = 0.0;
  std::array<double, 4> slope{};
};

struct Lattice {
  std::array<std::vector<double>, 4> axes;  // H1, H2, H3, K2
  std::vector<LatticePoint> points;

  std::size_t flat(const std::array<int, 4>& ix) const
  {
    std::size_t f = 0;
    for (std::size_t k = 0; k < 4; ++k) f = f * axes[k].size() + static_cast<std::size_t>(ix[k]);
    return f;
  }
};

inline Lattice solve_lattice(const std::array<std::vector<double>, 4>& axes, double alpha, const Regime& regime,
                             const Grid& grid, const NewtonOptions& opts)
{
  Lattice lat;
  lat.axes = axes;
  for (int a = 0; a < static_cast<int>(axes[0].size()); ++a)
    for (int b = 0; b < static_cast<int>(axes[1].size()); ++b)
      for (int c = 0; c < static_cast<int>(axes[2].size()); ++c)
        for (int d = 0; d < static_cast<int>(axes[3].size()); ++d) {
          LatticePoint pt;
          pt.index = {a, b, c, d};
          pt.params = {axes[0][a], axes[1][b], axes[2][c], axes[3][d], alpha};
          try {
            const auto sol = solve_tw(pt.params, regime, grid, opts);
            pt.converged = true;
            pt.V = sol.V;
            pt.V_identity = velocity_identity(sol, Stencil::central(opts.stencil_order));
            pt.residual = sol.residual_norm;
            pt.slope = velocity_gradient(sol, grid, opts);
          }
          catch (const Error& e) {
            pt.failure = e.what();
          }
          lat.points.push_back(pt);
        }
  return lat;
}

struct LatticeSummary {
  int converged = 0, total = 0;
  double max_identity_gap = 0.0;
  double max_continuity_ratio = 0.0;
  std::vector<std::string> failures;
};

/// Convergence, |V - V_identity| and continuity of V between lattice neighbours.
inline LatticeSummary summarize(const Lattice& lat)
{
  LatticeSummary s;
  s.total = static_cast<int>(lat.points.size());
  for (const auto& p : lat.points) {
    if (!p.converged) {
      s.failures.push_back(p.failure);
      continue;
    }
    ++s.converged;
    s.max_identity_gap = std::max(s.max_identity_gap, std::abs(p.V - p.V_identity));
    for (std::size_t k = 0; k < 4; ++k) {
      auto ix = p.index;
      if (ix[k] + 1 >= static_cast<int>(lat.axes[k].size())) continue;
      ++ix[k];
      const auto& q = lat.points[lat.flat(ix)];
      if (!q.converged) continue;
      const double spacing = lat.axes[k][ix[k]] - lat.axes[k][ix[k] - 1];
      const double slope = std::max(std::abs(p.slope[k]), std::abs(q.slope[k]));
      const double bound = continuity_factor * spacing * slope + continuity_floor;
      s.max_continuity_ratio = std::max(s.max_continuity_ratio, std::abs(q.V - p.V) / bound);
    }
  }
  return s;
}

inline CriterionResult lattice_criterion(int id, const std::string& name, const Lattice& lat)
{
  const auto s = summarize(lat);
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.expected = {{"converged", s.total}, {"identity_gap", 0.0}, {"continuity_ratio_max", 1.0}};
  r.observed = {{"converged", s.converged},
                {"identity_gap", s.max_identity_gap},
                {"continuity_ratio_max", s.max_continuity_ratio}};
  r.tolerance = {{"identity_gap", identity_abs_tol}, {"continuity_factor", continuity_factor}};
  r.pass = s.converged == s.total && s.max_identity_gap <= identity_abs_tol && s.max_continuity_ratio <= 1.0;
  for (const auto& f : s.failures) r.details.push_back(f);
  return r;
}

inline double observed_order(double e1, double e2)
{
  if (e2 == 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(std::abs(e1) / std::abs(e2));
}

}  // namespace accept

class AcceptanceSuite {
public:
  explicit AcceptanceSuite(AcceptanceOptions opt = {}) : opt_(std::move(opt)) {}

  CriterionResult static_residual_walker() const
  {
    CriterionResult r = criterion(1, "static residual at the Walker base point");
    r.expected = 0.0;
    r.tolerance = accept::static_residual_tol;
    double worst = 0.0;
    for (double K2 : {0.5, 1.0, 5.0}) {
      const Params p{0.0, 0.0, 0.0, K2, opt_.alpha};
      const auto ref = reference_profile(p, Regime::walker(K2, opt_.alpha), opt_.grid, opt_.newton.theta);
      const double n = residual(Correction(opt_.grid.size()), 0.0, p, ref, stencil()).norm();
      worst = std::max(worst, n);
      r.details.push_back({{"K2", K2}, {"residual", n}});
    }
    r.observed = worst;
    r.pass = worst <= accept::static_residual_tol;
    return r;
  }

  CriterionResult static_residual_transverse() const
  {
    CriterionResult r = criterion(2, "static residual at the transverse base point");
    r.expected = 0.0;
    r.tolerance = accept::static_residual_tol;
    double worst = 0.0;
    for (double H3 : {0.25, 0.5, 0.75}) {
      const Params p{0.0, 0.0, H3, 0.0, opt_.alpha};
      const Grid g = grid_for_transverse(H3, opt_.grid);
      const auto ref = reference_profile(p, Regime::transverse(0.0, H3, opt_.alpha), g, opt_.newton.theta);
      const double n = residual(Correction(g.size()), 0.0, p, ref, stencil()).norm();
      worst = std::max(worst, n);
      r.details.push_back({{"H3", H3}, {"residual", n}, {"L_x", g.half_width()}});
    }
    r.observed = worst;
    r.pass = worst <= accept::static_residual_tol;
    return r;
  }

  CriterionResult kernel_L() const
  {
    const auto op = potential_L(opt_.grid);
    const auto ev = lowest_eigenpairs(op, 2);
    std::vector<double> sech(op.size());
    for (std::size_t i = 0; i < op.size(); ++i) sech[i] = 1.0 / std::cosh(op.xi[i]);
    const double cs = std::abs(cosine_similarity(ev[0].vector, sech));
    CriterionResult r = criterion(3, "kernel of L spanned by sech with a spectral gap");
    r.expected = {{"lambda0", 0.0}, {"cosine", 1.0}, {"lambda1_min", accept::gap_min}};
    r.observed = {{"lambda0", ev[0].value}, {"cosine", cs}, {"lambda1", ev[1].value}};
    r.tolerance = {{"lambda0", accept::kernel_tol}, {"cosine_min", accept::cosine_min}};
    r.pass = std::abs(ev[0].value) <= accept::kernel_tol && cs >= accept::cosine_min && ev[1].value >= accept::gap_min;
    return r;
  }

  CriterionResult lower_bound_L_plus_K2() const
  {
    CriterionResult r = criterion(4, "lower bound K2 for L + K2");
    r.expected = "lambda0 = K2 and Rayleigh quotients >= K2";
    r.tolerance = {{"lambda0", accept::kernel_tol}, {"rayleigh", accept::rayleigh_tol}};
    r.pass = true;
    double worst_l = 0.0, worst_q = std::numeric_limits<double>::infinity();
    for (double K2 : {0.5, 1.0}) {
      const auto op = potential_L(opt_.grid).shifted(K2);
      const double l0 = lowest_eigenpairs(op, 1)[0].value;
      const auto rep = rayleigh_bound_check(op, K2, opt_.trials, opt_.seed, accept::rayleigh_tol);
      worst_l = std::max(worst_l, std::abs(l0 - K2));
      worst_q = std::min(worst_q, rep.min_quotient - K2);
      r.pass = r.pass && std::abs(l0 - K2) <= accept::kernel_tol && rep.passed;
      r.details.push_back({{"K2", K2}, {"lambda0", l0}, {"min_rayleigh", rep.min_quotient}, {"trials", opt_.trials}});
    }
    r.observed = {{"max_abs_lambda0_minus_K2", worst_l}, {"min_rayleigh_minus_K2", worst_q}};
    return r;
  }

  CriterionResult lower_bound_N() const
  {
    CriterionResult r = criterion(5, "lower bound H3^2 for N");
    r.expected = "lambda0(N) >= H3^2";
    r.tolerance = accept::kernel_tol;
    double worst = std::numeric_limits<double>::infinity();
    for (double H3 : {0.25, 0.5, 0.75}) {
      const auto op = potential_N(H3, grid_for_transverse(H3, opt_.grid));
      const double l0 = lowest_eigenpairs(op, 1)[0].value;
      worst = std::min(worst, l0 - H3 * H3);
      r.details.push_back({{"H3", H3}, {"lambda0", l0}, {"bound", H3 * H3}});
    }
    r.observed = {{"min_lambda0_minus_H3sq", worst}};
    r.pass = worst >= -accept::kernel_tol;
    return r;
  }

  CriterionResult kernel_M() const
  {
    CriterionResult r = criterion(6, "kernel of M spanned by beta_T'");
    r.expected = {{"lambda0", 0.0}, {"cosine", 1.0}};
    r.tolerance = {{"lambda0", accept::kernel_M_tol}, {"cosine_min", accept::cosine_min}};
    double worst_l = 0.0, worst_c = 1.0;
    for (double H3 : {0.25, 0.5, 0.75}) {
      const Grid g = grid_for_transverse(H3, opt_.grid);
      const auto op = potential_M(H3, g);
      const auto ev = lowest_eigenpairs(op, 1);
      const auto bp = static_beta_prime(Regime::transverse(0.0, H3), g);
      const std::vector<double> inner(bp.begin() + 1, bp.end() - 1);
      const double cs = std::abs(cosine_similarity(ev[0].vector, inner));
      worst_l = std::max(worst_l, std::abs(ev[0].value));
      worst_c = std::min(worst_c, cs);
      r.details.push_back({{"H3", H3}, {"lambda0", ev[0].value}, {"cosine", cs}});
    }
    r.observed = {{"max_abs_lambda0", worst_l}, {"min_cosine", worst_c}};
    r.pass = worst_l <= accept::kernel_M_tol && worst_c >= accept::cosine_min;
    return r;
  }

  const accept::Lattice& walker_lattice() const
  {
    if (!walker_) {
      walker_ = accept::solve_lattice({{{-0.01, 0.0, 0.01}, {-0.05, 0.0, 0.05}, {-0.05, 0.0, 0.05}, {0.8, 1.0, 1.2}}},
                                      opt_.alpha, Regime::walker(1.0, opt_.alpha), opt_.grid, opt_.newton);
    }
    return *walker_;
  }

  const accept::Lattice& transverse_lattice() const
  {
    if (!transverse_) {
      transverse_ = accept::solve_lattice(
          {{{-0.005, 0.0, 0.005}, {-0.02, 0.0, 0.02}, {0.48, 0.5, 0.52}, {0.0, 0.01, 0.02}}}, opt_.alpha,
          Regime::transverse(0.0, 0.5, opt_.alpha), transverse_grid(), opt_.newton);
    }
    return *transverse_;
  }

  CriterionResult existence_walker() const
  {
    return accept::lattice_criterion(7, "travelling waves near the Walker base point", walker_lattice());
  }

  CriterionResult existence_transverse() const
  {
    return accept::lattice_criterion(8, "travelling waves near the transverse base point", transverse_lattice());
  }

  CriterionResult identity_consistency() const
  {
    CriterionResult r = criterion(9, "velocity identity reproduces the Newton speed");
    r.expected = {{"relative_gap", 0.0}, {"zero_field_speed", 0.0}};
    r.tolerance = {{"relative_gap", accept::identity_rel_tol}, {"zero_field_speed", accept::zero_speed_tol}};
    double rel = 0.0, zero = 0.0;
    int missing = 0;
    for (const auto* lat : {&walker_lattice(), &transverse_lattice()}) {
      for (const auto& p : lat->points) {
        if (!p.converged) {
          ++missing;
          continue;
        }
        if (p.params.H1 == 0.0) zero = std::max(zero, std::abs(p.V));
        else rel = std::max(rel, std::abs(p.V_identity - p.V) / std::abs(p.V));
      }
    }
    r.observed = {{"relative_gap", rel}, {"zero_field_speed", zero}, {"unconverged", missing}};
    r.pass = missing == 0 && rel <= accept::identity_rel_tol && zero <= accept::zero_speed_tol;
    return r;
  }

  // The far-field energy gap U(m+) - U(m-) = -2 H1 and int |m'|^2 = 2 for the
  // Bloch wall give the small-field oracle V = -H1 / alpha.
  CriterionResult small_field_mobility() const
  {
    CriterionResult r = criterion(10, "small-field mobility V/H1 -> -1/alpha");
    r.expected = -1.0 / opt_.alpha;
    r.tolerance = accept::mobility_tol;
    double worst = 0.0, prev = std::numeric_limits<double>::infinity();
    bool shrinking = true, ok = true;
    for (double H1 : {0.01, 0.005, 0.0025}) {
      try {
        const auto s = solve_tw({H1, 0.0, 0.0, 1.0, opt_.alpha}, Regime::walker(1.0, opt_.alpha), opt_.grid,
                                opt_.newton);
        const double ratio = s.V / H1;
        const double err = std::abs(ratio * opt_.alpha + 1.0);
        worst = std::max(worst, err);
        shrinking = shrinking && err <= prev;
        prev = err;
        r.details.push_back({{"H1", H1}, {"V", s.V}, {"V_over_H1", ratio}, {"relative_error", err}});
      }
      catch (const Error& e) {
        ok = false;
        r.details.push_back(e.what());
      }
    }
    r.observed = {{"max_relative_error", worst}, {"error_decreasing", shrinking}};
    r.pass = ok && shrinking && worst <= accept::mobility_tol;
    return r;
  }

  CriterionResult dynamics_consistency() const
  {
    CriterionResult r = criterion(11, "time integration reproduces the travelling wave");
    r.expected = {{"relative_speed_gap", 0.0}, {"energy_rise_per_step", 0.0}, {"unit_violation", 0.0}};
    r.tolerance = {{"relative_speed_gap", accept::dynamics_speed_tol},
                   {"energy_rise_per_step", accept::energy_rise_tol},
                   {"unit_violation", accept::unit_tol}};
    const Grid& g = opt_.grid;
    const double dt = 0.2 * g.h() * g.h();
    IntegrateOptions io;
    io.stencil_order = opt_.newton.stencil_order;
    double gap = std::numeric_limits<double>::infinity();
    double rise = std::numeric_limits<double>::infinity(), unit = rise;
    bool ok = true;
    try {
      const Params p{0.01, 0.0, 0.0, 1.0, opt_.alpha};
      const auto tw = solve_tw(p, Regime::walker(1.0, opt_.alpha), g, opt_.newton);
      // Start right of centre so the wall, moving left, stays clear of the boundary.
      const double x0 = 0.4 * g.half_width();
      const auto tr = integrate(to_cartesian(bloch_wall(g, x0)), {-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, p,
                                opt_.dynamics_T, dt, io);
      const auto w = track_wall(tr);
      gap = std::abs(w.velocity - tw.V) / std::abs(tw.V);
      r.details.push_back({{"V_tw", tw.V}, {"V_tracked", w.velocity}, {"x_start", x0}, {"x_end", w.positions.back()},
                           {"T", opt_.dynamics_T}, {"dt", dt}});
    }
    catch (const Error& e) {
      ok = false;
      r.details.push_back(e.what());
    }
    try {
      // Zero applied field: a tilted, compressed wall relaxes back toward the Bloch wall.
      const Params p{0.0, 0.0, 0.0, 1.0, opt_.alpha};
      PolarProfile w0 = bloch_wall(g);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.xi(i);
        w0.psi[i] = pi / 2 + 0.3 / std::cosh(x);
        w0.beta[i] = 2.0 * std::atan(std::exp(-1.4 * x));
      }
      const auto tr = integrate(to_cartesian(w0), {-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, p, 20.0, dt, io);
      rise = tr.max_energy_increase;
      unit = 0.0;
      for (double v : tr.max_unit_violation) unit = std::max(unit, v);
      r.details.push_back({{"energy_start", tr.energy.front()}, {"energy_end", tr.energy.back()},
                           {"max_energy_rise", rise}, {"max_unit_violation", unit}, {"T", 20.0}});
    }
    catch (const Error& e) {
      ok = false;
      r.details.push_back(e.what());
    }
    r.observed = {{"relative_speed_gap", gap}, {"energy_rise_per_step", rise}, {"unit_violation", unit}};
    r.pass = ok && gap <= accept::dynamics_speed_tol && rise <= accept::energy_rise_tol && unit <= accept::unit_tol;
    return r;
  }

  CriterionResult mesh_and_step_convergence() const
  {
    CriterionResult r = criterion(12, "convergence under mesh and time-step refinement");
    r.expected = {{"eigenvalue_order", 2.0}, {"velocity_order_second_order_stencil", 2.0},
                  {"velocity_change_default_stencil", 0.0}, {"time_order", 4.0}};
    r.tolerance = {{"eigenvalue_order", {accept::order_lo, accept::order_hi}},
                   {"velocity_order_second_order_stencil", {accept::order_lo, accept::order_hi}},
                   {"velocity_change_default_stencil", "h^2 |V|"},
                   {"time_order", {accept::time_order_lo, accept::time_order_hi}}};
    bool pass = true;
    double eig_lo = 1e9, eig_hi = -1e9;

    const Grid g0 = opt_.grid;
    const Grid g1 = g0.refined(), g2 = g1.refined();
    auto eig_order = [&](const std::string& label, const std::function<SchrodingerOp(const Grid&)>& make) {
      const double l0 = lowest_eigenpairs(make(g0), 1)[0].value;
      const double l1 = lowest_eigenpairs(make(g1), 1)[0].value;
      const double l2 = lowest_eigenpairs(make(g2), 1)[0].value;
      const double p = accept::observed_order(l0 - l1, l1 - l2);
      eig_lo = std::min(eig_lo, p);
      eig_hi = std::max(eig_hi, p);
      pass = pass && p >= accept::order_lo && p <= accept::order_hi;
      r.details.push_back({{"operator", label}, {"lambda0", {l0, l1, l2}}, {"order", p}});
    };
    eig_order("L", [](const Grid& g) { return potential_L(g); });
    eig_order("L+0.5", [](const Grid& g) { return potential_L(g).shifted(0.5); });
    for (double H3 : {0.25, 0.5, 0.75}) {
      const Grid base = grid_for_transverse(H3, g0);
      const double L = base.half_width();
      eig_order("N(H3=" + std::to_string(H3).substr(0, 4) + ")", [H3, L, &g0](const Grid& g) {
        const std::size_t factor = (g.size() - 1) / (g0.size() - 1);
        return potential_N(H3, Grid::with_spacing(L, g0.h() / static_cast<double>(factor)));
      });
    }

    // Velocities on representative lattice points: observed order of the
    // second-order stencil, and the size of the change with the default stencil.
    const std::vector<Params> pts = {{0.01, 0.0, 0.0, 1.0, opt_.alpha},
                                     {0.01, 0.05, 0.05, 0.8, opt_.alpha},
                                     {-0.01, -0.05, 0.05, 1.2, opt_.alpha}};
    double v_lo = 1e9, v_hi = -1e9, v_change = 0.0, v_bound = std::numeric_limits<double>::infinity();
    const Regime walker = Regime::walker(1.0, opt_.alpha);
    try {
      for (const auto& p : pts) {
        NewtonOptions o2 = opt_.newton;
        o2.stencil_order = 2;
        const Grid c0 = Grid::with_spacing(g0.half_width(), 2.0 * g0.h());
        const Grid c1 = g0, c2 = g1;
        const double a = solve_tw(p, walker, c0, o2).V;
        const double b = solve_tw(p, walker, c1, o2).V;
        const double c = solve_tw(p, walker, c2, o2).V;
        const double order = accept::observed_order(a - b, b - c);
        v_lo = std::min(v_lo, order);
        v_hi = std::max(v_hi, order);
        pass = pass && order >= accept::order_lo && order <= accept::order_hi;

        const double d0 = solve_tw(p, walker, g0, opt_.newton).V;
        const double d1 = solve_tw(p, walker, g1, opt_.newton).V;
        const double bound = g0.h() * g0.h() * std::abs(d0);
        v_change = std::max(v_change, std::abs(d0 - d1));
        v_bound = std::min(v_bound, bound);
        pass = pass && std::abs(d0 - d1) <= bound;
        r.details.push_back({{"params", params_json(p)},
                             {"V_second_order", {a, b, c}},
                             {"order", order},
                             {"V_default", {d0, d1}},
                             {"change", std::abs(d0 - d1)}});
      }
    }
    catch (const Error& e) {
      pass = false;
      r.details.push_back(e.what());
    }

    // Time step: final profiles at dt, dt/2, dt/4 on a coarse mesh, from a
    // perturbed wall so the transient dominates rounding.
    double t_order = std::numeric_limits<double>::quiet_NaN();
    try {
      const Grid gc(20.0, 201);
      const Params p{0.01, 0.0, 0.0, 1.0, opt_.alpha};
      PolarProfile w0 = bloch_wall(gc);
      for (std::size_t i = 0; i < gc.size(); ++i) {
        w0.psi[i] = pi / 2 + 0.3 / std::cosh(gc.xi(i));
        w0.beta[i] = 2.0 * std::atan(std::exp(-1.4 * gc.xi(i)));
      }
      const auto m0 = to_cartesian(w0);
      const double dt = 0.2 * gc.h() * gc.h();
      IntegrateOptions io;
      io.keep_profiles = false;
      io.output_interval = 1e9;
      std::vector<std::vector<Vec3>> finals;
      for (double f : {1.0, 0.5, 0.25}) {
        finals.push_back(integrate(m0, {-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, p, 2.0, f * dt, io).profiles.back().m);
      }
      auto sup = [](const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, norm(a[i] - b[i]));
        return s;
      };
      const double e1 = sup(finals[0], finals[1]), e2 = sup(finals[1], finals[2]);
      t_order = accept::observed_order(e1, e2);
      pass = pass && t_order >= accept::time_order_lo && t_order <= accept::time_order_hi;
      r.details.push_back({{"dt", dt}, {"diff_dt_dt2", e1}, {"diff_dt2_dt4", e2}, {"order", t_order}});
    }
    catch (const Error& e) {
      pass = false;
      r.details.push_back(e.what());
    }

    r.observed = {{"eigenvalue_order", {eig_lo, eig_hi}},
                  {"velocity_order_second_order_stencil", {v_lo, v_hi}},
                  {"velocity_change_default_stencil", v_change},
                  {"velocity_change_bound", v_bound},
                  {"time_order", t_order}};
    r.pass = pass;
    return r;
  }

  /// Every criterion in order; `on_result` sees each entry as soon as it is done.
  std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {}) const
  {
    std::vector<std::function<CriterionResult()>> checks = {
        [&] { return static_residual_walker(); },     [&] { return static_residual_transverse(); },
        [&] { return kernel_L(); },                   [&] { return lower_bound_L_plus_K2(); },
        [&] { return lower_bound_N(); },              [&] { return kernel_M(); },
        [&] { return existence_walker(); },           [&] { return existence_transverse(); },
        [&] { return identity_consistency(); },       [&] { return small_field_mobility(); },
        [&] { return dynamics_consistency(); },       [&] { return mesh_and_step_convergence(); }};
    std::vector<CriterionResult> out;
    for (std::size_t k = 0; k < checks.size(); ++k) {
      CriterionResult r;
      try {
        r = checks[k]();
      }
      catch (const Error& e) {
        r.id = static_cast<int>(k + 1);
        r.name = "criterion " + std::to_string(k + 1);
        r.pass = false;
        r.details.push_back(e.what());
      }
      if (on_result) on_result(r);
      out.push_back(std::move(r));
    }
    return out;
  }

  Grid transverse_grid() const { return grid_for_transverse(0.5, opt_.grid); }

private:
  Stencil stencil() const { return Stencil::central(opt_.newton.stencil_order); }

  AcceptanceOptions opt_;
  mutable std::optional<accept::Lattice> walker_, transverse_;
};

inline nlohmann::json report_json(const std::vector<CriterionResult>& results)
{
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["criteria"] = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    j["criteria"].push_back({{"id", r.id},
                             {"name", r.name},
                             {"expected", r.expected},
                             {"observed", r.observed},
                             {"tolerance", r.tolerance},
                             {"pass", r.pass},
                             {"details", r.details}});
    all = all && r.pass;
  }
  j["all_pass"] = all;
  return j;
}

}  // namespace llgtw

#endif  // LLGTW_ACCEPTANCE_HPP

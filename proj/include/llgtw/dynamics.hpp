#ifndef LLGTW_DYNAMICS_HPP
#define LLGTW_DYNAMICS_HPP

// Method-of-lines LLG: explicit RK4 in time on the stencil effective field,
// with pointwise renormalization and clamped far-field nodes.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "llgtw/energetics.hpp"
#include "llgtw/error.hpp"
#include "llgtw/model.hpp"
#include "llgtw/stencil.hpp"

namespace llgtw {

/// m_t = (m x H - alpha m x (m x H)) / (1 + alpha^2), zero at the two end nodes.
inline std::vector<Vec3> llg_rhs(const std::vector<Vec3>& m, const Vec3& minus, const Vec3& plus, const Params& p,
                                 double h, const Stencil& st = Stencil::central(default_stencil_order))
{
  const auto H = effective_field(m, minus, plus, p, h, st);
  const double scale = 1.0 / (1.0 + p.alpha * p.alpha);
  std::vector<Vec3> out(m.size());
  for (std::size_t i = 1; i + 1 < m.size(); ++i) {
    const Vec3 mh = cross(m[i], H[i]);
    out[i] = scale * (mh - p.alpha * cross(m[i], mh));
  }
  return out;
}

/// Right-hand side on every node, end nodes included (no clamping).
inline std::vector<Vec3> llg_rhs_all(const std::vector<Vec3>& m, const Vec3& minus, const Vec3& plus,
                                     const Params& p, double h,
                                     const Stencil& st = Stencil::central(default_stencil_order))
{
  const auto H = effective_field(m, minus, plus, p, h, st);
  const double scale = 1.0 / (1.0 + p.alpha * p.alpha);
  std::vector<Vec3> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3 mh = cross(m[i], H[i]);
    out[i] = scale * (mh - p.alpha * cross(m[i], mh));
  }
  return out;
}

inline std::vector<Vec3> llg_rhs(const CartesianProfile& c, const Vec3& minus, const Vec3& plus, const Params& p,
                                 const Stencil& st = Stencil::central(default_stencil_order))
{
  return llg_rhs(c.m, minus, plus, p, c.grid.h(), st);
}

struct Trajectory {
  Grid grid;
  Vec3 minus, plus;
  std::vector<double> t;
  std::vector<CartesianProfile> profiles;
  std::vector<double> x_w;                 // NaN where the sample has no single wall
  std::vector<double> energy;
  std::vector<double> max_unit_violation;  // worst | |m| - 1 | before renormalization since the previous sample
  double max_energy_increase = 0.0;        // worst per-step increase (checked only at zero applied field)
  std::size_t steps = 0;
  double dt = 0.0;
};

struct IntegrateOptions {
  double output_interval = 1.0;
  int stencil_order = default_stencil_order;
  double unit_tol = 1e-3;          // Instability above this deviation
  double energy_tol = 1e-6;        // Instability above this per-step increase at zero field
  double boundary_margin = 5.0;    // WallNearBoundary within this distance of +-L_x
  bool keep_profiles = true;
};

/// Zero crossings of m_x between neighbouring nodes, linearly interpolated.
inline std::vector<double> wall_crossings(const CartesianProfile& c)
{
  std::vector<double> xs;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const double a = c.m[i].x, b = c.m[i + 1].x;
    if ((a < 0.0) != (b < 0.0)) {
      const double s = a / (a - b);
      xs.push_back(c.grid.xi(i) + s * c.grid.h());
    }
  }
  return xs;
}

/// Position of the single wall; throws NoWall or MultipleWalls otherwise.
inline double wall_position(const CartesianProfile& c)
{
  const auto xs = wall_crossings(c);
  if (xs.empty()) throw Error(ErrorKind::NoWall, "m_x has no sign change");
  if (xs.size() > 1) throw Error(ErrorKind::MultipleWalls, std::to_string(xs.size()) + " sign changes of m_x");
  return xs.front();
}

namespace detail {

inline double unit_violation(const std::vector<Vec3>& m)
{
  double worst = 0.0;
  for (const auto& v : m) worst = std::max(worst, std::abs(norm(v) - 1.0));
  return worst;
}

}  // namespace detail

/// RK4 with projection m <- m/|m| after each step. Requires dt <= h^2/4.
inline Trajectory integrate(const CartesianProfile& m0, const Vec3& minus, const Vec3& plus, const Params& p,
                            double T, double dt, const IntegrateOptions& opt = {})
{
  p.check();
  const Grid& grid = m0.grid;
  const double h = grid.h();
  if (!(dt > 0.0) || dt > 0.25 * h * h) {
    throw Error(ErrorKind::InvalidParams, "time step must satisfy 0 < dt <= h^2/4 (dt=" + std::to_string(dt) +
                                              ", h=" + std::to_string(h) + ")");
  }
  if (!(T >= 0.0)) throw Error(ErrorKind::InvalidParams, "final time T must be non-negative");
  m0.check(1e-9);

  const Stencil st = Stencil::central(opt.stencil_order);
  const std::size_t n = grid.size();
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  const double k = steps > 0 ? T / static_cast<double>(steps) : dt;
  const std::size_t every =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(opt.output_interval / k)));
  const bool zero_field = p.H1 == 0.0 && p.H2 == 0.0 && p.H3 == 0.0;
  const double wall_limit = grid.half_width() - opt.boundary_margin;

  Trajectory tr{grid, minus, plus, {}, {}, {}, {}, {}, 0.0, steps, k};
  std::vector<Vec3> m = m0.m;
  m.front() = minus;
  m.back() = plus;

  double window_violation = 0.0;
  auto record = [&](double t, double e) {
    CartesianProfile c(grid);
    c.m = m;
    const auto xs = wall_crossings(c);
    const double xw = xs.size() == 1 ? xs.front() : std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(xw) && std::abs(xw) > wall_limit) {
      throw Error(ErrorKind::WallNearBoundary, "wall at x=" + std::to_string(xw) + " within " +
                                                   std::to_string(opt.boundary_margin) + " of the boundary");
    }
    tr.t.push_back(t);
    tr.x_w.push_back(xw);
    tr.energy.push_back(e);
    tr.max_unit_violation.push_back(window_violation);
    if (opt.keep_profiles || tr.profiles.empty()) tr.profiles.push_back(std::move(c));
    else tr.profiles.back() = std::move(c);
    window_violation = 0.0;
  };

  double e_prev = micromagnetic_energy(m, minus, plus, p, grid, st);
  record(0.0, e_prev);

  std::vector<Vec3> y(n);
  for (std::size_t s = 1; s <= steps; ++s) {
    const auto k1 = llg_rhs(m, minus, plus, p, h, st);
    for (std::size_t i = 0; i < n; ++i) y[i] = m[i] + 0.5 * k * k1[i];
    const auto k2 = llg_rhs(y, minus, plus, p, h, st);
    for (std::size_t i = 0; i < n; ++i) y[i] = m[i] + 0.5 * k * k2[i];
    const auto k3 = llg_rhs(y, minus, plus, p, h, st);
    for (std::size_t i = 0; i < n; ++i) y[i] = m[i] + k * k3[i];
    const auto k4 = llg_rhs(y, minus, plus, p, h, st);
    for (std::size_t i = 0; i < n; ++i) m[i] += (k / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    const double viol = detail::unit_violation(m);
    if (!(viol <= opt.unit_tol)) {
      throw Error(ErrorKind::Instability, "|m| deviated by " + std::to_string(viol) + " at step " +
                                              std::to_string(s) + " (limit " + std::to_string(opt.unit_tol) + ")");
    }
    window_violation = std::max(window_violation, viol);
    for (auto& v : m) v *= 1.0 / norm(v);

    const bool sample = s % every == 0 || s == steps;
    if (zero_field || sample) {
      const double e = micromagnetic_energy(m, minus, plus, p, grid, st);
      if (zero_field) {
        const double rise = e - e_prev;
        tr.max_energy_increase = std::max(tr.max_energy_increase, rise);
        if (rise > opt.energy_tol) {
          throw Error(ErrorKind::Instability, "energy rose by " + std::to_string(rise) + " at step " +
                                                  std::to_string(s) + " with zero applied field");
        }
      }
      e_prev = e;
      if (sample) record(static_cast<double>(s) * k, e);
    }
  }
  return tr;
}

struct WallTrack {
  std::vector<double> t;
  std::vector<double> positions;
  double velocity = 0.0;
};

/// Wall positions of every sample and the least-squares slope over the final third.
inline WallTrack track_wall(const Trajectory& traj)
{
  WallTrack w;
  w.t = traj.t;
  if (traj.profiles.size() != traj.t.size()) {
    throw Error(ErrorKind::Config, "track_wall needs every snapshot (keep_profiles)");
  }
  for (const auto& c : traj.profiles) w.positions.push_back(wall_position(c));
  if (w.t.size() < 2) return w;
  const double t0 = w.t.front() + 2.0 / 3.0 * (w.t.back() - w.t.front());
  double n = 0.0, st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < w.t.size(); ++i) {
    if (w.t[i] < t0 - 1e-12) continue;
    n += 1.0;
    st += w.t[i];
    sx += w.positions[i];
    stt += w.t[i] * w.t[i];
    stx += w.t[i] * w.positions[i];
  }
  const double den = n * stt - st * st;
  w.velocity = (n >= 2.0 && den > 0.0) ? (n * stx - st * sx) / den : 0.0;
  return w;
}

}  // namespace llgtw

#endif  // LLGTW_DYNAMICS_HPP

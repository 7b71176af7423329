#include <cmath>

#include <gtest/gtest.h>

#include "llgtw/dynamics.hpp"
#include "llgtw/staticsol.hpp"

using namespace llgtw;

namespace {

CartesianProfile perturbed_wall(const Grid& g)
{
  PolarProfile p(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    p.psi[i] = pi / 2 + 0.3 / std::cosh(g.xi(i));
    p.beta[i] = 2.0 * std::atan(std::exp(-1.4 * g.xi(i)));
  }
  p.minus = {pi / 2, pi};
  p.plus = {pi / 2, 0.0};
  return to_cartesian(p);
}

double max_distance(const CartesianProfile& a, const CartesianProfile& b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, norm(a.m[i] - b.m[i]));
  return m;
}

template <class F>
ErrorKind kind_of(F&& f)
{
  try {
    f();
  }
  catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

const Vec3 ex{1, 0, 0}, ez{0, 0, 1};

}  // namespace

TEST(LlgRhs, UniformStateUnderEasyAxisField)
{
  const Grid g(5.0, 11);
  const Params p{0.2, 0, 0, 1.0, 0.1};
  const std::vector<Vec3> m(g.size(), ez);
  const auto r = llg_rhs(m, ez, ez, p, g.h());
  const double s = 1.0 / (1.0 + 0.01);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    EXPECT_NEAR(r[i].x, 0.1 * 0.2 * s, 1e-14);
    EXPECT_NEAR(r[i].y, 0.2 * s, 1e-14);
    EXPECT_NEAR(r[i].z, 0.0, 1e-14);
  }
  EXPECT_EQ(norm(r.front()), 0.0);
  EXPECT_EQ(norm(r.back()), 0.0);
  EXPECT_NEAR(llg_rhs_all(m, ez, ez, p, g.h()).front().y, 0.2 * s, 1e-14);
}

TEST(LlgRhs, TangentToSphere)
{
  const Grid g(10.0, 101);
  const auto c = perturbed_wall(g);
  const auto r = llg_rhs(c, -ex, ex, {0.01, 0.02, 0.03, 1.0, 0.1});
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(dot(r[i], c.m[i]), 0.0, 1e-13);
}

TEST(LlgRhs, BlochWallIsStationary)
{
  const Grid g(20.0, 401);
  const auto r = llg_rhs(to_cartesian(bloch_wall(g)), -ex, ex, {0, 0, 0, 1.0, 0.1});
  double worst = 0.0;
  for (const auto& v : r) worst = std::max(worst, norm(v));
  EXPECT_LT(worst, 1e-6);
}

TEST(Integrate, StaticWallsStayPut)
{
  const Grid g(20.0, 401);
  const double dt = 0.2 * g.h() * g.h();
  const auto bloch = to_cartesian(bloch_wall(g));
  const auto tb = integrate(bloch, -ex, ex, {0, 0, 0, 1.0, 0.1}, 10.0, dt);
  EXPECT_LE(max_distance(tb.profiles.back(), bloch), 1e-6);
  EXPECT_NEAR(tb.x_w.back(), 0.0, 1e-6);

  const Grid gt = grid_for_transverse(0.5, g);
  const auto w = transverse_wall(0.5, gt);
  const auto trans = to_cartesian(w);
  const auto tt = integrate(trans, direction(w.minus), direction(w.plus), {0, 0, 0.5, 0.0, 0.1}, 10.0, dt);
  EXPECT_LE(max_distance(tt.profiles.back(), trans), 1e-6);
}

TEST(Integrate, SamplingAndBookkeeping)
{
  const Grid g(10.0, 101);
  const auto tr = integrate(perturbed_wall(g), -ex, ex, {0.01, 0, 0, 1.0, 0.1}, 1.0, 0.002, {0.25});
  ASSERT_EQ(tr.t.size(), 5u);
  EXPECT_NEAR(tr.t.back(), 1.0, 1e-12);
  EXPECT_EQ(tr.steps, 500u);
  EXPECT_EQ(tr.profiles.size(), 5u);
  for (const auto& c : tr.profiles) EXPECT_LT(c.max_unit_violation(), 1e-14);
  EXPECT_EQ(norm(tr.profiles.back().m.front() + ex), 0.0);
  EXPECT_EQ(norm(tr.profiles.back().m.back() - ex), 0.0);
}

TEST(Integrate, RejectsLargeStep)
{
  const Grid g(10.0, 101);
  const double h = g.h();
  EXPECT_EQ(kind_of([&] { integrate(perturbed_wall(g), -ex, ex, {0, 0, 0, 1, 0.1}, 1.0, 0.26 * h * h); }),
            ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([&] { integrate(perturbed_wall(g), -ex, ex, {0, 0, 0, 1, 0.1}, 1.0, 0.0); }),
            ErrorKind::InvalidParams);
}

TEST(Integrate, InstabilityWhenUnitToleranceExceeded)
{
  const Grid g(10.0, 101);
  IntegrateOptions o;
  o.unit_tol = 1e-30;
  EXPECT_EQ(kind_of([&] { integrate(perturbed_wall(g), -ex, ex, {0.01, 0, 0, 1, 0.1}, 1.0, 0.002, o); }),
            ErrorKind::Instability);
}

TEST(Integrate, WallNearBoundary)
{
  const Grid g(20.0, 201);
  const auto c = to_cartesian(bloch_wall(g, 16.0));
  EXPECT_EQ(kind_of([&] { integrate(c, -ex, ex, {0, 0, 0, 1, 0.1}, 1.0, 0.008); }), ErrorKind::WallNearBoundary);
}

TEST(Integrate, EnergyDecreasesAtZeroField)
{
  const Grid g(10.0, 101);
  const auto tr = integrate(perturbed_wall(g), -ex, ex, {0, 0, 0, 1.0, 0.1}, 5.0, 0.002, {0.5});
  EXPECT_LE(tr.max_energy_increase, 1e-12);
  for (std::size_t k = 1; k < tr.energy.size(); ++k) EXPECT_LE(tr.energy[k], tr.energy[k - 1] + 1e-12);
  EXPECT_LT(tr.energy.back(), tr.energy.front());
  // relaxes towards the Bloch wall energy 2
  EXPECT_GT(tr.energy.back(), 2.0 - 1e-3);
}

TEST(Integrate, UnitDeviationShrinksWithStep)
{
  const Grid g(10.0, 101);
  const Params p{0.01, 0.02, 0.0, 1.0, 0.1};
  const auto a = integrate(perturbed_wall(g), -ex, ex, p, 0.5, 0.002, {0.5});
  const auto b = integrate(perturbed_wall(g), -ex, ex, p, 0.5, 0.001, {0.5});
  const double va = a.max_unit_violation.back(), vb = b.max_unit_violation.back();
  EXPECT_GT(va, 0.0);
  EXPECT_GT(va / vb, 8.0);
}

TEST(Integrate, FourthOrderInTime)
{
  const Grid g(20.0, 201);
  const Params p{0.01, 0.0, 0.0, 1.0, 0.1};
  const auto m0 = perturbed_wall(g);
  std::vector<CartesianProfile> ends;
  for (double dt : {0.008, 0.004, 0.002}) ends.push_back(integrate(m0, -ex, ex, p, 2.0, dt, {2.0}).profiles.back());
  const double order = std::log2(max_distance(ends[0], ends[1]) / max_distance(ends[1], ends[2]));
  EXPECT_NEAR(order, 4.0, 0.5);
}

TEST(WallPosition, Errors)
{
  const Grid g(10.0, 101);
  CartesianProfile c(g);
  for (auto& v : c.m) v = ex;
  EXPECT_EQ(kind_of([&] { wall_position(c); }), ErrorKind::NoWall);
  for (std::size_t i = 0; i < g.size(); ++i) c.m[i] = std::abs(g.xi(i)) < 2.0 ? -ex : ex;
  EXPECT_EQ(kind_of([&] { wall_position(c); }), ErrorKind::MultipleWalls);
  EXPECT_NEAR(wall_position(to_cartesian(bloch_wall(g, 1.234))), 1.234, 1e-3);
}

TEST(TrackWall, StaticWallHasZeroVelocity)
{
  const Grid g(20.0, 201);
  const auto tr = integrate(to_cartesian(bloch_wall(g)), -ex, ex, {0, 0, 0, 1.0, 0.1}, 4.0, 0.008, {0.5});
  EXPECT_NEAR(track_wall(tr).velocity, 0.0, 1e-8);
}

TEST(TrackWall, SyntheticLinearMotion)
{
  const Grid g(20.0, 401);
  Trajectory tr{g, -ex, ex, {}, {}, {}, {}, {}, 0.0, 0, 0.0};
  for (int k = 0; k <= 30; ++k) {
    const double t = 0.1 * k, c = -2.0 + 0.3 * t;
    CartesianProfile prof(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = std::clamp((g.xi(i) - c) / 3.0, -1.0, 1.0);
      prof.m[i] = {s, 0.0, std::sqrt(1.0 - s * s)};
    }
    tr.t.push_back(t);
    tr.profiles.push_back(prof);
  }
  const auto w = track_wall(tr);
  EXPECT_NEAR(w.velocity, 0.3, 1e-6);
  EXPECT_NEAR(w.positions.front(), -2.0, 1e-9);
}

TEST(TrackWall, MissingWallPropagates)
{
  const Grid g(10.0, 101);
  Trajectory tr{g, ex, ex, {0.0}, {}, {}, {}, {}, 0.0, 0, 0.0};
  CartesianProfile c(g);
  for (auto& v : c.m) v = ex;
  tr.profiles.push_back(c);
  EXPECT_EQ(kind_of([&] { track_wall(tr); }), ErrorKind::NoWall);
}

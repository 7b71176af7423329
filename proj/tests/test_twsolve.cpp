#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "llgtw/twsolve.hpp"

using namespace llgtw;

namespace {

const Grid default_grid(20.0, 801);

// Walker's exact travelling wave: sin 2 phi = 2 H1 / (alpha K2),
// width (1 + K2 sin^2 phi)^(-1/2), V = -H1 width / alpha.
double walker_speed(double H1, double K2, double alpha)
{
  const double phi = 0.5 * std::asin(2 * H1 / (alpha * K2));
  const double width = 1.0 / std::sqrt(1.0 + K2 * std::sin(phi) * std::sin(phi));
  return -H1 * width / alpha;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(Switching, Properties)
{
  const SwitchingFunction th;
  EXPECT_EQ(th(-0.5), 0.0);
  EXPECT_EQ(th(0.0), 0.0);
  EXPECT_EQ(th(1.0), 1.0);
  EXPECT_EQ(th(3.0), 1.0);
  EXPECT_DOUBLE_EQ(th(0.5), 0.5);
  // C2 at the joins: one-sided difference quotients of first and second derivative vanish
  const double e = 1e-4;
  EXPECT_NEAR((th(e) - th(0)) / e, 0.0, 1e-6);
  EXPECT_NEAR((th(1) - th(1 - e)) / e, 0.0, 1e-6);
  EXPECT_NEAR((th(2 * e) - 2 * th(e) + th(0)) / (e * e), 0.0, 1e-2);
}

TEST(ReferenceProfile, WalkerBaseIsBlochWall)
{
  const auto ref = reference_profile({0, 0, 0, 1}, Regime::walker(1.0), default_grid);
  const auto w = bloch_wall(default_grid);
  for (std::size_t i = 0; i < default_grid.size(); ++i) {
    EXPECT_EQ(ref.psi_at(i), w.psi[i]);
    EXPECT_EQ(ref.beta_at(i), w.beta[i]);
  }
}

TEST(ReferenceProfile, TransverseBaseIsTransverseWall)
{
  const auto ref = reference_profile({0, 0, 0.5, 0}, Regime::transverse(0.0, 0.5), default_grid);
  const auto w = transverse_wall(0.5, default_grid);
  for (std::size_t i = 0; i < default_grid.size(); ++i) {
    EXPECT_NEAR(ref.psi_at(i), w.psi[i], 1e-15);
    EXPECT_NEAR(ref.beta_at(i), w.beta[i], 1e-15);
  }
}

TEST(ReferenceProfile, LimitsFollowTarget)
{
  const Grid g = grid_for_transverse(0.5, default_grid);
  const auto ref = reference_profile({0, 0, 0.6, 0}, Regime::transverse(0.0, 0.5), g);
  EXPECT_NEAR(ref.target.plus.beta, std::asin(0.6), 1e-12);
  EXPECT_NEAR(ref.beta.back(), std::asin(0.6), 1e-8);
  EXPECT_NEAR(ref.beta.front(), pi - std::asin(0.6), 1e-8);
  EXPECT_NEAR(std::asin(0.6), 0.6435, 1e-4);
}

TEST(Residual, VanishesAtWalkerBase)
{
  for (double K2 : {0.5, 1.0, 5.0}) {
    const Params p{0, 0, 0, K2};
    const auto ref = reference_profile(p, Regime::walker(K2), default_grid);
    EXPECT_LE(residual(Correction(default_grid.size()), 0.0, p, ref).norm(), 1e-6);
  }
}

TEST(Residual, VanishesAtTransverseBase)
{
  for (double H3 : {0.25, 0.5, 0.75}) {
    const Grid g = grid_for_transverse(H3, default_grid);
    const Params p{0, 0, H3, 0};
    const auto ref = reference_profile(p, Regime::transverse(0.0, H3), g);
    EXPECT_LE(residual(Correction(g.size()), 0.0, p, ref).norm(), 1e-6);
  }
}

// On the Bloch wall only the Zeeman part of F1 survives: G1 = -H1 sin(beta_W) = -H1 sech(xi), G2 = 0.
TEST(Residual, EasyAxisFieldOnBlochWall)
{
  const double H1 = 0.01;
  const Params p{H1, 0, 0, 1};
  const auto ref = reference_profile(p, Regime::walker(1.0), default_grid);
  const auto r = residual(Correction(default_grid.size()), 0.0, p, ref);
  for (std::size_t i = 1; i + 1 < default_grid.size(); ++i) {
    EXPECT_NEAR(r.G1[i - 1], -H1 / std::cosh(default_grid.xi(i)), 1e-9);
    EXPECT_NEAR(r.G2[i - 1], 0.0, 1e-12);
  }
  EXPECT_NEAR(r.norm(), std::sqrt(2.0) * H1, 1e-6);
}

TEST(Residual, PolarSingularity)
{
  const Params p{0, 0, 0, 1};
  const auto ref = reference_profile(p, Regime::walker(1.0), default_grid);
  Correction c(default_grid.size());
  c.u[400] = 2.0;
  try {
    residual(c, 0.0, p, ref);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PolarSingularity);
  }
}

TEST(Jacobian, MatchesFiniteDifferences)
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  const Grid g(6.0, 61);
  for (int order : {2, 8}) {
    const Stencil st = Stencil::central(order);
    for (int trial = 0; trial < 3; ++trial) {
      const Params p{u(rng), u(rng), u(rng), 1.0 + 4 * u(rng), 0.1};
      const auto ref = reference_profile(p, Regime::walker(1.0), g);
      Correction c(g.size());
      for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        c.u[i] = u(rng) * std::exp(-0.1 * g.xi(i) * g.xi(i));
        c.w[i] = u(rng) * std::exp(-0.1 * g.xi(i) * g.xi(i));
      }
      const double V = 10 * u(rng);
      const auto J = jacobian(c, V, p, ref, st).dense();
      const auto F = finite_difference_jacobian(c, V, p, ref, 1e-7, st);
      for (std::size_t i = 0; i < J.size(); ++i)
        for (std::size_t k = 0; k < J.size(); ++k)
          ASSERT_NEAR(J[i][k], F[i][k], 1e-5 * std::max(1.0, std::abs(J[i][k]))) << i << "," << k;
    }
  }
}

TEST(SolveTW, WalkerBaseIsStatic)
{
  const auto s = solve_tw({0, 0, 0, 1}, Regime::walker(1.0), default_grid);
  EXPECT_NEAR(s.V, 0.0, 1e-10);
  const auto w = bloch_wall(default_grid);
  EXPECT_LE(max_abs_diff(s.profile.beta, w.beta), 1e-8);
  EXPECT_LE(max_abs_diff(s.profile.psi, w.psi), 1e-8);
  EXPECT_LT(s.residual_norm, 1e-10);
}

TEST(SolveTW, TransverseBaseIsStatic)
{
  const Grid g = grid_for_transverse(0.5, default_grid);
  const auto s = solve_tw({0, 0, 0.5, 0}, Regime::transverse(0.0, 0.5), g);
  EXPECT_NEAR(s.V, 0.0, 1e-10);
  EXPECT_LE(max_abs_diff(s.profile.beta, transverse_wall(0.5, g).beta), 1e-8);
}

TEST(SolveTW, SmallEasyAxisField)
{
  const auto s = solve_tw({0.01, 0, 0, 1, 0.1}, Regime::walker(1.0), default_grid);
  EXPECT_NEAR(s.V, -0.1, 0.003);
  EXPECT_NEAR(s.V, walker_speed(0.01, 1.0, 0.1), 1e-9);
  EXPECT_NEAR(velocity_identity(s), s.V, 1e-9);
}

TEST(SolveTW, WalkerExactSolutionAcrossFields)
{
  for (double K2 : {0.5, 2.0}) {
    for (double H1 : {-0.02, 0.005, 0.02}) {
      const auto s = solve_tw({H1, 0, 0, K2, 0.1}, Regime::walker(1.0), default_grid);
      EXPECT_NEAR(s.V, walker_speed(H1, K2, 0.1), 1e-8) << H1 << " " << K2;
    }
  }
}

TEST(SolveTW, FiniteDifferenceJacobianMode)
{
  const Grid g(14.0, 281);
  NewtonOptions o;
  o.finite_difference_jacobian = true;
  const Params p{0.01, 0.02, -0.03, 1.1, 0.1};
  const auto a = solve_tw(p, Regime::walker(1.0), g, o);
  const auto b = solve_tw(p, Regime::walker(1.0), g);
  EXPECT_NEAR(a.V, b.V, 1e-9);
}

TEST(SolveTW, TransverseDrive)
{
  const Regime r = Regime::transverse(0.0, 0.5);
  const Grid g = grid_for_transverse(0.5, default_grid);
  const auto s = solve_tw({0.003, 0.01, 0.51, 0.01, 0.1}, r, g);
  EXPECT_LT(s.V, 0.0);
  EXPECT_NEAR(velocity_identity(s), s.V, 1e-6 * std::abs(s.V));
}

TEST(SolveTW, IterationLimitIsReported)
{
  NewtonOptions o;
  o.max_iter = 1;
  try {
    solve_tw({0.04, 0, 0, 1, 0.1}, Regime::walker(1.0), default_grid, o);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoConvergence);
  }
}

TEST(SolveTW, BeyondBreakdownFails)
{
  try {
    solve_tw({0.08, 0, 0, 1, 0.1}, Regime::walker(1.0), default_grid);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::PolarSingularity) << e.what();
  }
}

TEST(SolveTW, TranslationGauge)
{
  const Params p{0.01, 0.02, 0.03, 1.0, 0.1};
  const auto s = solve_tw(p, Regime::walker(1.0), default_grid);
  TWSolution shifted = s;
  const std::size_t n = default_grid.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    shifted.profile.psi[i + 1] = s.profile.psi[i];
    shifted.profile.beta[i + 1] = s.profile.beta[i];
  }
  const auto r = solve_tw(p, Regime::walker(1.0), default_grid, {}, shifted);
  EXPECT_LE(max_abs_diff(r.profile.beta, s.profile.beta), 1e-8);
  EXPECT_LE(max_abs_diff(r.profile.psi, s.profile.psi), 1e-8);
  EXPECT_NEAR(r.V, s.V, 1e-10);
}

TEST(SolveTW, SecondOrderStencilMeshConvergence)
{
  NewtonOptions o;
  o.stencil_order = 2;
  const Params p{0.01, 0.03, 0.02, 1.0, 0.1};
  const Grid g(20.0, 401);
  const double a = solve_tw(p, Regime::walker(1.0), g, o).V;
  const double b = solve_tw(p, Regime::walker(1.0), g.refined(), o).V;
  const double c = solve_tw(p, Regime::walker(1.0), g.refined().refined(), o).V;
  EXPECT_NEAR((a - b) / (b - c), 4.0, 0.1);
}

TEST(VelocityIdentity, ZeroWithoutEasyAxisField)
{
  const auto s = solve_tw({0.0, 0.03, -0.04, 1.0, 0.1}, Regime::walker(1.0), default_grid);
  EXPECT_NEAR(velocity_identity(s), 0.0, 1e-15);
  EXPECT_NEAR(s.V, 0.0, 1e-10);
}

TEST(VelocityIdentity, BlochDenominator)
{
  const auto w = bloch_wall(default_grid);
  EXPECT_NEAR(exchange_integral(w), 2.0, 1e-8);
  EXPECT_NEAR(exchange_integral(w, Stencil::central(2)), 2.0, default_grid.h() * default_grid.h());
  // with the Bloch profile and H1 drive the identity gives -H1/alpha
  TWSolution s{w, 0.0, {0.01, 0, 0, 1, 0.1}, 0.0, Regime::walker(1.0), 0};
  EXPECT_NEAR(velocity_identity(s), -0.1, 1e-8);
}

TEST(Continuation, SmallDriveIsMonotone)
{
  const auto br = continue_branch({0, 0, 0, 1, 0.1}, {0.001, 0, 0, 1, 0.1}, Regime::walker(1.0), default_grid, 5);
  EXPECT_TRUE(br.report.completed);
  ASSERT_EQ(br.solutions.size(), 6u);
  for (std::size_t k = 1; k < br.solutions.size(); ++k) EXPECT_LT(br.solutions[k].V, br.solutions[k - 1].V);
  EXPECT_EQ(br.report.rejected_steps, 0);
}

TEST(Continuation, ZeroLengthPath)
{
  const auto br = continue_branch({0, 0, 0, 1, 0.1}, {0, 0, 0, 1, 0.1}, Regime::walker(1.0), default_grid, 5);
  EXPECT_TRUE(br.report.completed);
  EXPECT_EQ(br.solutions.size(), 1u);
  EXPECT_EQ(br.solutions[0].V, 0.0);
}

// The branch ends at a finite field; the exact travelling wave ceases to exist at alpha K2 / 2.
TEST(Continuation, BranchEndsNearWalkerField)
{
  const Grid g(20.0, 401);
  const auto br = continue_branch({0, 0, 0, 1, 0.1}, {0.1, 0, 0, 1, 0.1}, Regime::walker(1.0), g, 10, {}, 1e-4);
  EXPECT_FALSE(br.report.completed);
  const double Hc = br.report.last_good.H1;
  EXPECT_GT(Hc, 0.0);
  EXPECT_LT(Hc, 1.0);
  EXPECT_LE(Hc, 0.05 + 1e-4);
  EXPECT_GT(Hc, 0.04);
}

TEST(LinearizedOperator, WalkerKernelDirection)
{
  const Grid& g = default_grid;
  const auto D = linearized_operator(Regime::walker(1.0), g, 0.1);
  const std::size_t m = g.size() - 2;
  std::vector<double> x(2 * m + 1, 0.0);
  for (std::size_t k = 0; k < m; ++k) x[2 * k + 1] = -1.0 / std::cosh(g.xi(k + 1));
  const auto y = D.apply(x);
  double first = 0.0, second = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    first = std::max(first, std::abs(y[2 * k]));
    second = std::max(second, std::abs(y[2 * k + 1]));
  }
  EXPECT_LE(first, g.h() * g.h());
  EXPECT_EQ(second, 0.0);
  EXPECT_NEAR(y.back(), 2.0, 1e-6);
}

TEST(LinearizedOperator, WalkerSpeedColumn)
{
  const Grid& g = default_grid;
  const auto D = linearized_operator(Regime::walker(1.0), g, 0.1);
  std::vector<double> x(D.size(), 0.0);
  x.back() = 1.0;
  const auto y = D.apply(x);
  for (std::size_t k = 0; k + 2 < g.size(); ++k) {
    const double bp = -1.0 / std::cosh(g.xi(k + 1));
    EXPECT_NEAR(y[2 * k], 0.1 * bp, 1e-15);
    EXPECT_NEAR(y[2 * k + 1], -bp, 1e-15);
  }
  EXPECT_EQ(y.back(), 0.0);
}

TEST(LinearizedOperator, TransverseKernelDirection)
{
  const Grid g = grid_for_transverse(0.5, default_grid);
  const Regime r = Regime::transverse(0.0, 0.5);
  const auto D = linearized_operator(r, g, 0.1);
  const auto bp = static_beta_prime(r, g);
  std::vector<double> x(D.size(), 0.0);
  for (std::size_t k = 0; k + 2 < g.size(); ++k) x[2 * k + 1] = bp[k + 1];
  const auto y = D.apply(x);
  double first = 0.0;
  for (std::size_t k = 0; k + 2 < g.size(); ++k) first = std::max(first, std::abs(y[2 * k]));
  EXPECT_LE(first, g.h() * g.h());
}

TEST(LinearizedOperator, AgreesWithJacobianOnSmoothVectors)
{
  auto gap = [](std::size_t n) {
    const Grid g(20.0, n);
    const Regime r = Regime::walker(1.0);
    const Params p{0, 0, 0, 1.0, 0.1};
    const auto ref = reference_profile(p, r, g);
    const auto J = jacobian(Correction(g.size()), 0.0, p, ref);
    const auto D = linearized_operator(r, g, 0.1);
    std::vector<double> x(D.size());
    for (std::size_t k = 0; k + 2 < g.size(); ++k) {
      const double xi = g.xi(k + 1);
      x[2 * k] = std::exp(-0.3 * xi * xi);
      x[2 * k + 1] = xi * std::exp(-0.2 * xi * xi);
    }
    x.back() = 0.3;
    const auto a = J.apply(x), b = D.apply(x);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(g.h() * s + (a.back() - b.back()) * (a.back() - b.back()));
  };
  const double e1 = gap(401), e2 = gap(801);
  EXPECT_LT(e1, 0.01);
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(LinearizedOperator, SmallestSingularValueBoundedBelow)
{
  std::vector<double> s;
  for (std::size_t n : {401u, 801u, 1601u}) {
    const Grid g(20.0, n);
    s.push_back(smallest_singular_value(linearized_operator(Regime::walker(1.0), g, 0.1), g.h()));
  }
  for (double v : s) EXPECT_GT(v, 0.01);
  EXPECT_NEAR(s[2] / s[0], 1.0, 0.05);
  const Grid gt = grid_for_transverse(0.5, default_grid);
  EXPECT_GT(smallest_singular_value(linearized_operator(Regime::transverse(0.0, 0.5), gt, 0.1), gt.h()), 0.01);
}

TEST(VelocityGradient, MatchesSecantSlope)
{
  const Params p{0.01, 0.02, 0.0, 1.0, 0.1};
  const auto s = solve_tw(p, Regime::walker(1.0), default_grid);
  const auto grad = velocity_gradient(s, default_grid);
  const double d = 1e-5;
  for (int k = 0; k < 4; ++k) {
    Params a = p, b = p;
    double* ca[4] = {&a.H1, &a.H2, &a.H3, &a.K2};
    double* cb[4] = {&b.H1, &b.H2, &b.H3, &b.K2};
    *ca[k] += d;
    *cb[k] -= d;
    const double slope =
        (solve_tw(a, Regime::walker(1.0), default_grid).V - solve_tw(b, Regime::walker(1.0), default_grid).V) / (2 * d);
    EXPECT_NEAR(grad[k], slope, 1e-4 * std::max(1.0, std::abs(slope))) << k;
  }
}

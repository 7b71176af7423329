#include <algorithm>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "llgtw/io.hpp"
#include "llgtw/staticsol.hpp"

using namespace llgtw;

namespace {

ConfigMap parse(const std::string& text)
{
  std::istringstream in(text);
  return parse_config(in);
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
  return ErrorKind::InvalidProfile;
}

}  // namespace

TEST(Config, ParsesCommentsAndWhitespace)
{
  const auto m = parse("# walker\n  H1 = 0.01   # drive\n\nK2=2\n");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.at("H1"), "0.01");
  EXPECT_EQ(m.at("K2"), "2");
}

TEST(Config, RejectsBadLines)
{
  EXPECT_EQ(kind_of([] { parse("bogus = 1\n"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { parse("H1 = 1\nH1 = 2\n"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { parse("H1 =\n"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { parse("H1 0.1\n"); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { make_run_config(parse("H1 = abc\n")); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { make_run_config(parse("n_nodes = 1.5\n")); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { make_run_config(parse("h = 0.1\nn_nodes = 401\n")); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { make_run_config(parse("regime = sideways\n")); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { read_config("/nonexistent/llgtw.cfg"); }), ErrorKind::Io);
}

TEST(Config, Defaults)
{
  const auto c = make_run_config({});
  EXPECT_EQ(c.regime.kind, Regime::Kind::Walker);
  EXPECT_EQ(c.params.K2, 1.0);
  EXPECT_EQ(c.params.alpha, 0.1);
  EXPECT_EQ(c.grid.size(), 801u);
  EXPECT_DOUBLE_EQ(c.grid.h(), 0.05);
  EXPECT_DOUBLE_EQ(c.time_step(), 0.2 * 0.05 * 0.05);
  EXPECT_EQ(c.newton.stencil_order, 8);
}

TEST(Config, TransverseWhenNoAnisotropy)
{
  const auto c = make_run_config(parse("K2 = 0\nH3 = 0.5\n"));
  EXPECT_EQ(c.regime.kind, Regime::Kind::Transverse);
  EXPECT_EQ(c.regime.base.H3, 0.5);
}

TEST(Config, DegenerateAndGridErrors)
{
  EXPECT_EQ(kind_of([] { make_run_config(parse("K2 = 0\n")); }), ErrorKind::DegenerateRegime);
  EXPECT_EQ(kind_of([] { make_run_config(parse("n_nodes = 800\n")); }), ErrorKind::InvalidGrid);
  EXPECT_EQ(kind_of([] { make_run_config(parse("L_x = -1\n")); }), ErrorKind::InvalidGrid);
  EXPECT_EQ(kind_of([] { make_run_config(parse("alpha = 0\n")); }), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of([] { make_run_config(parse("stencil_order = 5\n")); }), ErrorKind::Config);
}

TEST(Config, OverridesWin)
{
  auto m = parse("H1 = 0.01\nn_nodes = 401\n");
  apply_override(m, "H1", "0.02");
  apply_override(m, "T", "5");
  const auto c = make_run_config(m);
  EXPECT_EQ(c.params.H1, 0.02);
  EXPECT_EQ(c.T, 5.0);
  EXPECT_EQ(c.grid.size(), 401u);
  EXPECT_EQ(kind_of([&] { apply_override(m, "nope", "1"); }), ErrorKind::Config);
}

TEST(Config, SpacingSelectsGrid)
{
  const auto c = make_run_config(parse("L_x = 10\nh = 0.1\n"));
  EXPECT_EQ(c.grid.size(), 201u);
}

TEST(Serialization, SolutionRoundTrip)
{
  const Grid g(15.0, 151);
  TWSolution s{bloch_wall(g), -0.0123, {0.001, 0.002, 0.003, 1.5, 0.2}, 3e-11, Regime::walker(1.5, 0.2), 4};
  const auto j = solution_json(s);
  EXPECT_EQ(j.at("schema_version"), schema_version);
  EXPECT_EQ(j.at("m1").size(), 151u);
  const auto r = solution_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(r.V, s.V);
  EXPECT_EQ(r.params.K2, 1.5);
  EXPECT_EQ(r.params.alpha, 0.2);
  EXPECT_EQ(r.regime.kind, Regime::Kind::Walker);
  EXPECT_EQ(r.profile.grid.size(), 151u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(r.profile.psi[i], s.profile.psi[i]);
    EXPECT_EQ(r.profile.beta[i], s.profile.beta[i]);
  }
  EXPECT_EQ(r.profile.minus.beta, pi);
}

TEST(Serialization, MalformedInput)
{
  EXPECT_EQ(kind_of([] { solution_from_json(nlohmann::json::parse("{\"grid\": 1}")); }), ErrorKind::Io);
  const auto path = std::filesystem::temp_directory_path() / "llgtw_not_json.txt";
  write_text(path.string(), "not json");
  EXPECT_EQ(kind_of([&] { read_solution(path.string()); }), ErrorKind::Io);
  std::filesystem::remove(path);
}

TEST(Serialization, FileRoundTrip)
{
  const Grid g(15.0, 151);
  TWSolution s{transverse_wall(0.5, g), 0.0, {0, 0, 0.5, 0, 0.1}, 0.0, Regime::transverse(0, 0.5), 2};
  const auto path = std::filesystem::temp_directory_path() / "llgtw_solution.json";
  write_text(path.string(), solution_json(s).dump());
  const auto r = read_solution(path.string());
  EXPECT_EQ(r.regime.kind, Regime::Kind::Transverse);
  EXPECT_EQ(r.regime.base.H3, 0.5);
  EXPECT_EQ(r.profile.beta, s.profile.beta);
  std::filesystem::remove(path);
}

TEST(Tables, Headers)
{
  std::ostringstream a, b, c, d;
  const Grid g(2.0, 5);
  write_profile_csv(a, bloch_wall(g));
  const std::string text = a.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "xi,psi,beta,m1,m2,m3");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
  write_branch_csv(b, {});
  EXPECT_EQ(b.str(), "step,H1,H2,H3,K2,V,residual\n");
  write_diagnostics_csv(c, Trajectory{g, Vec3{1, 0, 0}, Vec3{1, 0, 0}, {}, {}, {}, {}, {}, 0.0, 0, 0.0});
  EXPECT_EQ(c.str(), "t,x_w,energy,max_unit_violation\n");
  write_cartesian_csv(d, to_cartesian(bloch_wall(g)));
  EXPECT_EQ(d.str().substr(0, d.str().find('\n')), "xi,m1,m2,m3");
}

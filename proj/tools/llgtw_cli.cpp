// llgtw: static walls, equilibria, travelling-wave solves, continuation,
// spectra, LLG simulation and the acceptance report.
//
// Exit codes: 0 ok, 1 computation or check failure, 2 usage/config error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "llgtw/llgtw.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace llgtw;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

bool is_config_error(ErrorKind k)
{
  switch (k) {
    case ErrorKind::Config:
    case ErrorKind::Io:
    case ErrorKind::InvalidParams:
    case ErrorKind::InvalidRegime:
    case ErrorKind::DegenerateRegime:
    case ErrorKind::InvalidGrid:
    case ErrorKind::InvalidField: return true;
    default: return false;
  }
}

// Config file plus per-key flags; flags win.
struct ConfigSource {
  std::string file;
  std::map<std::string, std::string> flags;

  void attach(CLI::App* app, const std::vector<std::string>& skip = {})
  {
    app->add_option("--config", file, "key = value configuration file");
    for (const auto& k : config_keys()) {
      if (std::find(skip.begin(), skip.end(), k) != skip.end()) continue;
      app->add_option("--" + k, flags[k], "override config key " + k);
    }
  }

  ConfigMap resolve() const
  {
    ConfigMap m = file.empty() ? ConfigMap{} : read_config(file);
    for (const auto& [k, v] : flags) {
      if (!v.empty()) apply_override(m, k, v);
    }
    return m;
  }

  RunConfig load() const { return make_run_config(resolve()); }
};

void emit(const std::string& path, const std::string& text)
{
  if (path.empty() || path == "-") std::cout << text;
  else write_text(path, text);
}

std::string csv_of(const PolarProfile& p)
{
  std::ostringstream os;
  write_profile_csv(os, p);
  return os.str();
}

json equilibria_json(const Params& p, const EquilibriumPair& e)
{
  auto state = [&](const Angles& a) {
    const auto t = torques(a.psi, a.beta, p);
    const Vec3 m = direction(a);
    return json{{"psi", a.psi}, {"beta", a.beta}, {"m", {m.x, m.y, m.z}}, {"F1", t.F1}, {"F2", t.F2},
                {"U", potential(m, p)}};
  };
  return {{"schema_version", schema_version}, {"params", params_json(p)}, {"plus", state(e.plus)},
          {"minus", state(e.minus)}, {"torque_residual", e.residual}};
}

// Base wall (optionally shifted Bloch wall) carried to the target far-field states.
PolarProfile initial_profile(const RunConfig& c)
{
  PolarProfile base = c.regime.kind == Regime::Kind::Walker ? bloch_wall(c.grid, c.wall_center)
                                                             : static_profile(c.regime, c.grid);
  if (c.regime.kind != Regime::Kind::Walker && c.wall_center != 0.0) {
    throw Error(ErrorKind::Config, "wall_center is only supported for the Walker regime");
  }
  const auto b = base_equilibria(c.regime);
  const auto t = equilibria(c.params, b);
  const SwitchingFunction th = c.newton.theta;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    const double x = c.grid.xi(i) - c.wall_center;
    base.psi[i] += th(x) * (t.plus.psi - b.plus.psi) + th(-x) * (t.minus.psi - b.minus.psi);
    base.beta[i] += th(x) * (t.plus.beta - b.plus.beta) + th(-x) * (t.minus.beta - b.minus.beta);
  }
  base.plus = t.plus;
  base.minus = t.minus;
  return base;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Travelling-wave domain walls of the 1D Landau-Lifshitz-Gilbert equation"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");  // -h is the grid spacing key

  // static
  auto* cmd_static = app.add_subcommand("static", "emit the Bloch or transverse static wall");
  std::string wall = "bloch", st_format = "csv", st_out;
  double st_H3 = 0.5, st_L = 20.0;
  std::size_t st_n = 801;
  cmd_static->add_option("--wall", wall, "bloch or transverse")->check(CLI::IsMember({"bloch", "transverse"}));
  cmd_static->add_option("--H3", st_H3, "transverse field (transverse wall)");
  cmd_static->add_option("--L_x", st_L, "half width");
  cmd_static->add_option("--n_nodes", st_n, "number of nodes (odd)");
  cmd_static->add_option("--format", st_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd_static->add_option("--out", st_out, "output file (default stdout)");

  // equilibria
  auto* cmd_eq = app.add_subcommand("equilibria", "far-field minima of U and their torque residuals");
  ConfigSource eq_cfg;
  eq_cfg.attach(cmd_eq);

  // solve-tw
  auto* cmd_tw = app.add_subcommand("solve-tw", "solve for a travelling wave");
  ConfigSource tw_cfg;
  std::string tw_seed, tw_csv;
  tw_cfg.attach(cmd_tw, {"seed"});
  cmd_tw->add_option("--seed", tw_seed, "profile JSON used as the Newton seed");
  cmd_tw->add_option("--csv", tw_csv, "also write the profile as CSV");

  // continue
  auto* cmd_cont = app.add_subcommand("continue", "natural-parameter continuation between two configs");
  std::string from_cfg, to_cfg, cont_out;
  int cont_steps = 10;
  double cont_floor = 1e-6;
  cmd_cont->add_option("--from", from_cfg, "start config (also supplies regime, grid, solver)")->required();
  cmd_cont->add_option("--to", to_cfg, "end config (parameters only)")->required();
  cmd_cont->add_option("--steps", cont_steps, "nominal number of steps")->check(CLI::PositiveNumber);
  cmd_cont->add_option("--out", cont_out, "output directory")->required();
  cmd_cont->add_option("--floor", cont_floor, "bisection floor in parameter distance");

  // spectrum
  auto* cmd_spec = app.add_subcommand("spectrum", "lowest eigenvalues of L, M or N");
  std::string op_name = "L", spec_vec_csv;
  double sp_H3 = 0.5, sp_K2 = 0.0, sp_L = 20.0;
  std::size_t sp_k = 3, sp_n = 801;
  cmd_spec->add_option("--operator", op_name, "L, M or N")->check(CLI::IsMember({"L", "M", "N"}));
  cmd_spec->add_option("--H3", sp_H3, "transverse field for M, N");
  cmd_spec->add_option("--K2", sp_K2, "shift added to L");
  cmd_spec->add_option("--k", sp_k, "number of eigenvalues")->check(CLI::PositiveNumber);
  cmd_spec->add_option("--L_x", sp_L, "half width");
  cmd_spec->add_option("--n_nodes", sp_n, "number of nodes (odd)");
  cmd_spec->add_option("--eigvec-csv", spec_vec_csv, "write eigenvectors as CSV");

  // simulate
  auto* cmd_sim = app.add_subcommand("simulate", "integrate the LLG equation from the static wall");
  ConfigSource sim_cfg;
  std::string sim_out;
  int snap_every = 10;
  sim_cfg.attach(cmd_sim, {"out"});
  cmd_sim->add_option("--out", sim_out, "output directory")->required();
  cmd_sim->add_option("--snapshot-every", snap_every, "write every k-th sample as CSV")->check(CLI::PositiveNumber);

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "run the acceptance suite and write a JSON report");
  ConfigSource ver_cfg;
  std::string ver_out;
  ver_cfg.attach(cmd_verify, {"out"});
  cmd_verify->add_option("--out", ver_out, "report file (default stdout)");
  auto* cmd_ver_eq = cmd_verify->add_subcommand("equilibria", "same as the equilibria subcommand");
  ConfigSource ver_eq_cfg;
  ver_eq_cfg.attach(cmd_ver_eq);

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  try {
    if (cmd_static->parsed()) {
      const Grid g(st_L, st_n);
      PolarProfile p = wall == "bloch" ? bloch_wall(g) : transverse_wall(st_H3, grid_for_transverse(st_H3, g));
      if (st_format == "csv") {
        emit(st_out, csv_of(p));
      }
      else {
        json j = profile_json(p);
        j["schema_version"] = schema_version;
        j["wall"] = wall;
        if (wall == "transverse") j["H3"] = st_H3;
        emit(st_out, j.dump(2) + "\n");
      }
      return exit_ok;
    }

    if (cmd_eq->parsed() || cmd_ver_eq->parsed()) {
      const RunConfig c = (cmd_eq->parsed() ? eq_cfg : ver_eq_cfg).load();
      const auto e = equilibria(c.params, base_equilibria(c.regime));
      std::cout << equilibria_json(c.params, e).dump(2) << "\n";
      return exit_ok;
    }

    if (cmd_tw->parsed()) {
      const RunConfig c = tw_cfg.load();
      std::optional<TWSolution> seed;
      if (!tw_seed.empty()) seed = read_solution(tw_seed);
      const auto sol = solve_tw(c.params, c.regime, c.grid, c.newton, seed);
      json j = solution_json(sol);
      j["V_identity"] = velocity_identity(sol, Stencil::central(c.newton.stencil_order));
      emit(c.out, j.dump(2) + "\n");
      if (!tw_csv.empty()) write_text(tw_csv, csv_of(sol.profile));
      std::fprintf(stderr, "converged in %d iterations: V = %.12g, residual = %.3g\n", sol.iterations, sol.V,
                   sol.residual_norm);
      return exit_ok;
    }

    if (cmd_cont->parsed()) {
      const RunConfig a = make_run_config(read_config(from_cfg));
      const ConfigMap bm = read_config(to_cfg);
      Params end = a.params;
      end.H1 = detail::to_double(bm, "H1", end.H1);
      end.H2 = detail::to_double(bm, "H2", end.H2);
      end.H3 = detail::to_double(bm, "H3", end.H3);
      end.K2 = detail::to_double(bm, "K2", end.K2);
      end.check();
      const auto br = continue_branch(a.params, end, a.regime, a.grid, cont_steps, a.newton, cont_floor);
      fs::create_directories(cont_out);
      for (std::size_t k = 0; k < br.solutions.size(); ++k) {
        std::ostringstream name;
        name << "step_" << std::setw(4) << std::setfill('0') << k << ".json";
        write_text((fs::path(cont_out) / name.str()).string(), solution_json(br.solutions[k]).dump() + "\n");
      }
      std::ostringstream csv;
      write_branch_csv(csv, br);
      write_text((fs::path(cont_out) / "branch.csv").string(), csv.str());
      const json rep = {{"schema_version", schema_version},
                        {"completed", br.report.completed},
                        {"last_good", params_json(br.report.last_good)},
                        {"last_fraction", br.report.last_fraction},
                        {"accepted_steps", br.report.accepted_steps},
                        {"rejected_steps", br.report.rejected_steps},
                        {"reason", br.report.reason}};
      write_text((fs::path(cont_out) / "report.json").string(), rep.dump(2) + "\n");
      std::cout << rep.dump(2) << "\n";
      return br.solutions.empty() ? exit_failure : exit_ok;
    }

    if (cmd_spec->parsed()) {
      Grid g(sp_L, sp_n);
      SchrodingerOp op;
      if (op_name == "L") {
        op = potential_L(g).shifted(sp_K2);
      }
      else {
        g = grid_for_transverse(sp_H3, g);
        op = op_name == "M" ? potential_M(sp_H3, g) : potential_N(sp_H3, g);
      }
      const auto ev = lowest_eigenpairs(op, sp_k);
      std::vector<double> values;
      for (const auto& e : ev) values.push_back(e.value);
      json j = {{"schema_version", schema_version}, {"operator", op_name}, {"eigenvalues", values},
                {"grid", {{"half_width", g.half_width()}, {"n_nodes", g.size()}, {"h", g.h()}}}};
      if (op_name == "L") j["K2"] = sp_K2;
      else j["H3"] = sp_H3;
      std::cout << j.dump(2) << "\n";
      if (!spec_vec_csv.empty()) {
        std::ostringstream os;
        os << "xi";
        for (std::size_t k = 0; k < ev.size(); ++k) os << ",v" << k;
        os << "\n" << std::setprecision(17);
        for (std::size_t i = 0; i < op.size(); ++i) {
          os << op.xi[i];
          for (const auto& e : ev) os << ',' << e.vector[i];
          os << '\n';
        }
        write_text(spec_vec_csv, os.str());
      }
      return exit_ok;
    }

    if (cmd_sim->parsed()) {
      const RunConfig c = sim_cfg.load();
      const PolarProfile w0 = initial_profile(c);
      IntegrateOptions io;
      io.output_interval = c.output_interval;
      io.stencil_order = c.newton.stencil_order;
      const auto tr =
          integrate(to_cartesian(w0), direction(w0.minus), direction(w0.plus), c.params, c.T, c.time_step(), io);
      fs::create_directories(sim_out);
      std::ostringstream diag;
      write_diagnostics_csv(diag, tr);
      write_text((fs::path(sim_out) / "diagnostics.csv").string(), diag.str());
      for (std::size_t k = 0; k < tr.profiles.size(); ++k) {
        if (k % static_cast<std::size_t>(snap_every) != 0 && k + 1 != tr.profiles.size()) continue;
        std::ostringstream name, os;
        name << "snapshot_" << std::setw(5) << std::setfill('0') << k << ".csv";
        write_cartesian_csv(os, tr.profiles[k]);
        write_text((fs::path(sim_out) / name.str()).string(), os.str());
      }
      json j = {{"schema_version", schema_version}, {"steps", tr.steps}, {"dt", tr.dt},
                {"energy_final", tr.energy.back()}, {"max_energy_increase", tr.max_energy_increase}};
      try {
        const auto w = track_wall(tr);
        j["velocity"] = w.velocity;
        j["x_w_final"] = w.positions.back();
      }
      catch (const Error& e) {
        j["velocity"] = nullptr;
        j["wall"] = e.what();
      }
      std::cout << j.dump(2) << "\n";
      return exit_ok;
    }

    if (cmd_verify->parsed()) {
      const RunConfig c = ver_cfg.load();
      const AcceptanceSuite suite(acceptance_options(c));
      const auto results = suite.run_all([](const CriterionResult& r) {
        std::fprintf(stderr, "[%s] %2d %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
      });
      const json rep = report_json(results);
      emit(ver_out, rep.dump(2) + "\n");
      return rep["all_pass"].get<bool>() ? exit_ok : exit_failure;
    }
  }
  catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return is_config_error(e.kind()) ? exit_usage : exit_failure;
  }
  catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_failure;
  }
  return exit_usage;
}

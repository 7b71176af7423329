#ifndef LLGTW_IO_HPP
#define LLGTW_IO_HPP

// key = value run configuration, profile CSV/JSON, branch and trajectory tables.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "llgtw/dynamics.hpp"
#include "llgtw/error.hpp"
#include "llgtw/model.hpp"
#include "llgtw/twsolve.hpp"

namespace llgtw {

inline constexpr int schema_version = 1;

using ConfigMap = std::map<std::string, std::string>;

inline const std::vector<std::string>& config_keys()
{
  static const std::vector<std::string> keys = {
      "H1", "H2", "H3", "K2", "alpha",                                    // target parameters
      "regime", "base_H2", "base_H3", "base_K2",                           // base static wall
      "L_x", "n_nodes", "h",                                               // grid
      "tol_residual", "max_iter", "fd_step", "stencil_order", "jacobian", "xi0",
      "T", "dt", "output_interval", "wall_center",                         // dynamics
      "out", "seed", "trials"};
  return keys;
}

namespace detail {

inline std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool known_key(const std::string& k)
{
  for (const auto& c : config_keys()) {
    if (c == k) return true;
  }
  return false;
}

inline double to_double(const ConfigMap& m, const std::string& key, double fallback)
{
  const auto it = m.find(key);
  if (it == m.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  }
  catch (const std::exception&) {
    throw Error(ErrorKind::Config, "key '" + key + "' expects a number, got '" + it->second + "'");
  }
}

inline long long to_integer(const ConfigMap& m, const std::string& key, long long fallback)
{
  const auto it = m.find(key);
  if (it == m.end()) return fallback;
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  }
  catch (const std::exception&) {
    throw Error(ErrorKind::Config, "key '" + key + "' expects an integer, got '" + it->second + "'");
  }
}

}  // namespace detail

/// Parses `key = value` lines; '#' starts a comment. Unknown or repeated keys are rejected.
inline ConfigMap parse_config(std::istream& in, const std::string& origin = "<config>")
{
  ConfigMap m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw Error(ErrorKind::Config, where + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (!detail::known_key(key)) throw Error(ErrorKind::Config, where + ": unknown key '" + key + "'");
    if (value.empty()) throw Error(ErrorKind::Config, where + ": empty value for '" + key + "'");
    if (!m.emplace(key, value).second) throw Error(ErrorKind::Config, where + ": duplicate key '" + key + "'");
  }
  return m;
}

inline ConfigMap read_config(const std::string& path)
{
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
  return parse_config(f, path);
}

/// Flag overrides win over file values.
inline void apply_override(ConfigMap& m, const std::string& key, const std::string& value)
{
  if (!detail::known_key(key)) throw Error(ErrorKind::Config, "unknown key '" + key + "'");
  m[key] = value;
}

struct RunConfig {
  Params params;
  Regime regime;
  Grid grid{20.0, 801};
  NewtonOptions newton;
  double T = 200.0;
  double dt = 0.0;  // 0 selects 0.2 h^2
  double output_interval = 1.0;
  double wall_center = 0.0;
  std::string out;
  std::uint64_t seed = 20240917;
  int trials = 200;

  double time_step() const { return dt > 0.0 ? dt : 0.2 * grid.h() * grid.h(); }
};

/// Builds and validates a RunConfig. Regime defaults: Walker when K2 > 0,
/// otherwise Transverse about the target's (H2, H3).
inline RunConfig make_run_config(const ConfigMap& m)
{
  using detail::to_double;
  using detail::to_integer;
  RunConfig c;
  c.params.H1 = to_double(m, "H1", 0.0);
  c.params.H2 = to_double(m, "H2", 0.0);
  c.params.H3 = to_double(m, "H3", 0.0);
  c.params.K2 = to_double(m, "K2", 1.0);
  c.params.alpha = to_double(m, "alpha", 0.1);

  std::string regime = "auto";
  if (auto it = m.find("regime"); it != m.end()) regime = it->second;
  if (regime == "auto") regime = c.params.K2 > 0.0 ? "walker" : "transverse";
  if (regime == "walker") {
    const double k2 = to_double(m, "base_K2", c.params.K2 > 0.0 ? c.params.K2 : 1.0);
    c.regime = Regime::walker(k2, c.params.alpha);
  }
  else if (regime == "transverse") {
    c.regime = Regime::transverse(to_double(m, "base_H2", c.params.H2), to_double(m, "base_H3", c.params.H3),
                                  c.params.alpha);
  }
  else {
    throw Error(ErrorKind::Config, "regime must be walker, transverse or auto (got '" + regime + "')");
  }

  const double L = to_double(m, "L_x", 20.0);
  if (m.count("h") && m.count("n_nodes")) throw Error(ErrorKind::Config, "give either h or n_nodes, not both");
  if (m.count("h")) {
    c.grid = Grid::with_spacing(L, to_double(m, "h", 0.05));
  }
  else {
    const long long n = to_integer(m, "n_nodes", 801);
    if (n < 0) throw Error(ErrorKind::InvalidGrid, "n_nodes must be odd and >= 3 (got " + std::to_string(n) + ")");
    c.grid = Grid(L, static_cast<std::size_t>(n));
  }

  c.newton.tol_residual = to_double(m, "tol_residual", c.newton.tol_residual);
  c.newton.max_iter = static_cast<int>(to_integer(m, "max_iter", c.newton.max_iter));
  c.newton.fd_step = to_double(m, "fd_step", c.newton.fd_step);
  c.newton.stencil_order = static_cast<int>(to_integer(m, "stencil_order", c.newton.stencil_order));
  c.newton.theta.xi0 = to_double(m, "xi0", 1.0);
  if (auto it = m.find("jacobian"); it != m.end()) {
    if (it->second == "analytic") c.newton.finite_difference_jacobian = false;
    else if (it->second == "fd") c.newton.finite_difference_jacobian = true;
    else throw Error(ErrorKind::Config, "jacobian must be analytic or fd");
  }
  if (!(c.newton.tol_residual > 0.0) || c.newton.max_iter <= 0 || !(c.newton.fd_step > 0.0) ||
      !(c.newton.theta.xi0 > 0.0)) {
    throw Error(ErrorKind::Config, "solver options must be positive");
  }
  (void)Stencil::central(c.newton.stencil_order);

  c.T = to_double(m, "T", c.T);
  c.dt = to_double(m, "dt", c.dt);
  c.output_interval = to_double(m, "output_interval", c.output_interval);
  c.wall_center = to_double(m, "wall_center", c.wall_center);
  if (!(c.T >= 0.0) || c.dt < 0.0 || !(c.output_interval > 0.0)) {
    throw Error(ErrorKind::Config, "T >= 0, dt >= 0 and output_interval > 0 required");
  }
  if (auto it = m.find("out"); it != m.end()) c.out = it->second;
  const long long seed = to_integer(m, "seed", static_cast<long long>(c.seed));
  if (seed < 0) throw Error(ErrorKind::Config, "seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.trials = static_cast<int>(to_integer(m, "trials", c.trials));
  if (c.trials <= 0) throw Error(ErrorKind::Config, "trials must be positive");

  validate(c.params, c.regime);
  return c;
}

// ---- profiles ----

inline void write_profile_csv(std::ostream& os, const PolarProfile& p)
{
  const auto c = to_cartesian(p);
  os << "xi,psi,beta,m1,m2,m3\n" << std::setprecision(17);
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << p.grid.xi(i) << ',' << p.psi[i] << ',' << p.beta[i] << ',' << c.m[i].x << ',' << c.m[i].y << ','
       << c.m[i].z << '\n';
  }
}

inline nlohmann::json params_json(const Params& p)
{
  return {{"H1", p.H1}, {"H2", p.H2}, {"H3", p.H3}, {"K2", p.K2}, {"alpha", p.alpha}};
}

inline Params params_from_json(const nlohmann::json& j)
{
  return {j.at("H1").get<double>(), j.at("H2").get<double>(), j.at("H3").get<double>(), j.at("K2").get<double>(),
          j.at("alpha").get<double>()};
}

inline nlohmann::json regime_json(const Regime& r)
{
  return {{"kind", to_string(r.kind)}, {"H2", r.base.H2}, {"H3", r.base.H3}, {"K2", r.base.K2}};
}

inline nlohmann::json profile_json(const PolarProfile& p)
{
  const auto c = to_cartesian(p);
  nlohmann::json j;
  j["grid"] = {{"half_width", p.grid.half_width()}, {"n_nodes", p.grid.size()}, {"h", p.grid.h()}};
  j["boundary"] = {{"minus", {{"psi", p.minus.psi}, {"beta", p.minus.beta}}},
                   {"plus", {{"psi", p.plus.psi}, {"beta", p.plus.beta}}}};
  std::vector<double> xi(p.size()), m1(p.size()), m2(p.size()), m3(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    xi[i] = p.grid.xi(i);
    m1[i] = c.m[i].x;
    m2[i] = c.m[i].y;
    m3[i] = c.m[i].z;
  }
  j["xi"] = xi;
  j["psi"] = p.psi;
  j["beta"] = p.beta;
  j["m1"] = m1;
  j["m2"] = m2;
  j["m3"] = m3;
  return j;
}

inline nlohmann::json solution_json(const TWSolution& s)
{
  auto j = profile_json(s.profile);
  j["schema_version"] = schema_version;
  j["params"] = params_json(s.params);
  j["regime"] = regime_json(s.regime);
  j["V"] = s.V;
  j["residual_norm"] = s.residual_norm;
  j["iterations"] = s.iterations;
  return j;
}

inline TWSolution solution_from_json(const nlohmann::json& j)
{
  try {
    const auto& g = j.at("grid");
    const Grid grid(g.at("half_width").get<double>(), g.at("n_nodes").get<std::size_t>());
    PolarProfile p(grid);
    p.psi = j.at("psi").get<std::vector<double>>();
    p.beta = j.at("beta").get<std::vector<double>>();
    if (p.psi.size() != grid.size() || p.beta.size() != grid.size()) {
      throw Error(ErrorKind::InvalidProfile, "psi/beta length does not match n_nodes");
    }
    const auto& b = j.at("boundary");
    p.minus = {b.at("minus").at("psi").get<double>(), b.at("minus").at("beta").get<double>()};
    p.plus = {b.at("plus").at("psi").get<double>(), b.at("plus").at("beta").get<double>()};
    p.check();
    TWSolution s{p, j.value("V", 0.0), params_from_json(j.at("params")), j.value("residual_norm", 0.0), {}, 0};
    if (j.contains("regime")) {
      const auto& r = j.at("regime");
      const auto kind = r.at("kind").get<std::string>();
      s.regime = kind == "walker" ? Regime::walker(r.at("K2").get<double>(), s.params.alpha)
                                  : Regime::transverse(r.at("H2").get<double>(), r.at("H3").get<double>(),
                                                       s.params.alpha);
    }
    return s;
  }
  catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed profile JSON: ") + e.what());
  }
}

inline TWSolution read_solution(const std::string& path)
{
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  try {
    return solution_from_json(nlohmann::json::parse(f));
  }
  catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Io, "'" + path + "' is not JSON: " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text)
{
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  f << text;
  if (!f) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

// ---- tables ----

inline void write_branch_csv(std::ostream& os, const Branch& br)
{
  os << "step,H1,H2,H3,K2,V,residual\n" << std::setprecision(17);
  for (std::size_t k = 0; k < br.solutions.size(); ++k) {
    const auto& s = br.solutions[k];
    os << k << ',' << s.params.H1 << ',' << s.params.H2 << ',' << s.params.H3 << ',' << s.params.K2 << ',' << s.V
       << ',' << s.residual_norm << '\n';
  }
}

inline void write_diagnostics_csv(std::ostream& os, const Trajectory& tr)
{
  os << "t,x_w,energy,max_unit_violation\n" << std::setprecision(17);
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    os << tr.t[k] << ',';
    if (std::isfinite(tr.x_w[k])) os << tr.x_w[k];
    else os << "nan";
    os << ',' << tr.energy[k] << ',' << tr.max_unit_violation[k] << '\n';
  }
}

inline void write_cartesian_csv(std::ostream& os, const CartesianProfile& c)
{
  os << "xi,m1,m2,m3\n" << std::setprecision(17);
  for (std::size_t i = 0; i < c.size(); ++i) {
    os << c.grid.xi(i) << ',' << c.m[i].x << ',' << c.m[i].y << ',' << c.m[i].z << '\n';
  }
}

}  // namespace llgtw

#endif  // LLGTW_IO_HPP

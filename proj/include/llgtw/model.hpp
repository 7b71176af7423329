#ifndef LLGTW_MODEL_HPP
#define LLGTW_MODEL_HPP

// Core value types for the one-dimensional nanowire model: physical
// parameters, the base static regime, the uniform mesh, and magnetization
// profiles in polar (psi, beta) and Cartesian form.
//
// Polar coordinates use the hard axis y as polar axis:
//   m(psi, beta) = (sin psi cos beta, cos psi, sin psi sin beta).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "llgtw/error.hpp"

namespace llgtw {

inline constexpr double pi = std::numbers::pi;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b)
{
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Dimensionless physics knobs: applied field (H1, H2, H3), hard-axis
/// anisotropy K2 and Gilbert damping alpha.
struct Params {
  double H1 = 0.0;
  double H2 = 0.0;
  double H3 = 0.0;
  double K2 = 0.0;
  double alpha = 0.1;

  Vec3 field() const { return {H1, H2, H3}; }

  /// True at the single parameter point where no tail-to-tail wall theory applies.
  bool degenerate() const { return K2 == 0.0 && H2 == 0.0 && H3 == 0.0; }

  void check() const
  {
    for (double v : {H1, H2, H3, K2, alpha}) {
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParams, "parameters must be finite");
    }
    if (K2 < 0.0) throw Error(ErrorKind::InvalidParams, "K2 >= 0 violated (K2 = " + std::to_string(K2) + ")");
    if (alpha <= 0.0) {
      throw Error(ErrorKind::InvalidParams, "alpha > 0 violated (alpha = " + std::to_string(alpha) + ")");
    }
  }

  friend bool operator==(const Params&, const Params&) = default;
};

/// Distance between two parameter points in (H1, H2, H3, K2).
inline double param_distance(const Params& a, const Params& b)
{
  return std::sqrt((a.H1 - b.H1) * (a.H1 - b.H1) + (a.H2 - b.H2) * (a.H2 - b.H2) +
                   (a.H3 - b.H3) * (a.H3 - b.H3) + (a.K2 - b.K2) * (a.K2 - b.K2));
}

/// Convex combination (1 - t) a + t b of the field/anisotropy part; alpha taken from a.
inline Params lerp(const Params& a, const Params& b, double t)
{
  Params p = a;
  p.H1 = a.H1 + t * (b.H1 - a.H1);
  p.H2 = a.H2 + t * (b.H2 - a.H2);
  p.H3 = a.H3 + t * (b.H3 - a.H3);
  p.K2 = a.K2 + t * (b.K2 - a.K2);
  return p;
}

/// Base static regime about which travelling waves are continued.
struct Regime {
  enum class Kind { Walker, Transverse };

  Kind kind = Kind::Walker;
  Params base{0.0, 0.0, 0.0, 1.0, 0.1};

  static Regime walker(double K2, double alpha = 0.1) { return {Kind::Walker, {0.0, 0.0, 0.0, K2, alpha}}; }
  static Regime transverse(double H2, double H3, double alpha = 0.1)
  {
    return {Kind::Transverse, {0.0, H2, H3, 0.0, alpha}};
  }

  /// Magnitude of the transverse base field.
  double transverse_field() const { return std::hypot(base.H2, base.H3); }

  void check() const
  {
    base.check();
    if (base.degenerate()) {
      throw Error(ErrorKind::DegenerateRegime, "K2 = H2 = H3 = 0 is degenerate; no tail-to-tail static wall");
    }
    if (base.H1 != 0.0) throw Error(ErrorKind::InvalidRegime, "base point must have H1 = 0");
    if (kind == Kind::Walker) {
      if (!(base.K2 > 0.0)) throw Error(ErrorKind::InvalidRegime, "Walker regime requires K2 > 0");
      if (base.H2 != 0.0 || base.H3 != 0.0) {
        throw Error(ErrorKind::InvalidRegime, "Walker regime base requires H2 = H3 = 0");
      }
    }
    else {
      const double h2 = base.H2 * base.H2 + base.H3 * base.H3;
      if (!(h2 > 0.0 && h2 < 1.0)) {
        throw Error(ErrorKind::InvalidRegime, "Transverse regime requires 0 < H2^2 + H3^2 < 1");
      }
      if (base.K2 != 0.0) throw Error(ErrorKind::InvalidRegime, "Transverse regime requires K2 = 0");
      if (!(base.H3 > 0.0)) {
        throw Error(ErrorKind::InvalidRegime, "Transverse regime requires H3 > 0 (reflect z to flip the sign)");
      }
    }
  }
};

inline std::string to_string(Regime::Kind k) { return k == Regime::Kind::Walker ? "walker" : "transverse"; }

/// Accepts a continuation target `params` together with the base regime.
/// Arbitrary targets are allowed as long as they are valid parameters and
/// not the degenerate point.
inline void validate(const Params& params, const Regime& regime)
{
  params.check();
  if (params.degenerate()) {
    throw Error(ErrorKind::DegenerateRegime, "K2 = H2 = H3 = 0 is degenerate; no tail-to-tail static wall");
  }
  regime.check();
}

/// Uniform symmetric mesh on [-L, L] with an odd number of nodes, so that
/// xi = 0 is the centre node.
class Grid {
public:
  Grid(double half_width, std::size_t n_nodes) : n_(n_nodes)
  {
    if (n_nodes < 3 || n_nodes % 2 == 0) {
      throw Error(ErrorKind::InvalidGrid, "n_nodes must be odd and >= 3 (got " + std::to_string(n_nodes) + ")");
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
      throw Error(ErrorKind::InvalidGrid, "half_width must be positive and finite");
    }
    h_ = half_width / static_cast<double>(center());
  }

  /// Mesh with the requested spacing and at least the requested half width.
  static Grid with_spacing(double half_width, double h)
  {
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidGrid, "spacing must be positive");
    const auto c = static_cast<std::size_t>(std::ceil(half_width / h - 1e-9));
    return from_spacing(std::max<std::size_t>(c, 1), h);
  }

  /// Same spacing with `ghost` extra nodes on each side.
  Grid extended(std::size_t ghost) const { return from_spacing(center() + ghost, h_); }

  /// Same half width, spacing halved.
  Grid refined() const { return Grid(half_width(), 2 * n_ - 1); }

  std::size_t size() const { return n_; }
  std::size_t center() const { return (n_ - 1) / 2; }
  double h() const { return h_; }
  double half_width() const { return static_cast<double>(center()) * h_; }
  double xi(std::size_t i) const
  {
    return (static_cast<double>(i) - static_cast<double>(center())) * h_;
  }
  std::vector<double> nodes() const
  {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = xi(i);
    return x;
  }
  /// Trapezoid weight of node i.
  double weight(std::size_t i) const { return (i == 0 || i + 1 == n_) ? 0.5 * h_ : h_; }

  friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_ && a.h_ == b.h_; }

private:
  static Grid from_spacing(std::size_t center, double h)
  {
    Grid g(1.0, 2 * center + 1);
    g.h_ = h;
    return g;
  }

  std::size_t n_;
  double h_ = 0.0;
};

/// Polar angles of a direction on the sphere.
struct Angles {
  double psi = pi / 2;
  double beta = 0.0;
};

inline Vec3 direction(double psi, double beta)
{
  const double s = std::sin(psi);
  return {s * std::cos(beta), std::cos(psi), s * std::sin(beta)};
}
inline Vec3 direction(const Angles& a) { return direction(a.psi, a.beta); }

/// Sampled polar profile with far-field values. Angles are unwrapped:
/// beta is continuous in xi, not reduced mod 2 pi.
struct PolarProfile {
  Grid grid;
  std::vector<double> psi;
  std::vector<double> beta;
  Angles minus;  // xi -> -infinity
  Angles plus;   // xi -> +infinity

  explicit PolarProfile(Grid g) : grid(g), psi(g.size(), pi / 2), beta(g.size(), 0.0) {}

  std::size_t size() const { return psi.size(); }

  /// Throws unless 0 < psi < pi everywhere and the end samples sit within
  /// `end_tol` of the far-field values.
  void check(double end_tol = 1e-5) const
  {
    if (psi.size() != grid.size() || beta.size() != grid.size()) {
      throw Error(ErrorKind::InvalidProfile, "profile arrays must match the grid size");
    }
    for (std::size_t i = 0; i < psi.size(); ++i) {
      if (!(psi[i] > 0.0 && psi[i] < pi)) {
        throw Error(ErrorKind::PolarSingularity,
                    "0 < psi < pi violated at node " + std::to_string(i) + " (psi = " + std::to_string(psi[i]) + ")");
      }
    }
    const auto n = size() - 1;
    if (std::abs(psi[0] - minus.psi) > end_tol || std::abs(beta[0] - minus.beta) > end_tol ||
        std::abs(psi[n] - plus.psi) > end_tol || std::abs(beta[n] - plus.beta) > end_tol) {
      throw Error(ErrorKind::InvalidProfile, "end samples must match the boundary values");
    }
  }
};

/// Sampled unit-vector field.
struct CartesianProfile {
  Grid grid;
  std::vector<Vec3> m;

  explicit CartesianProfile(Grid g) : grid(g), m(g.size()) {}

  std::size_t size() const { return m.size(); }

  double max_unit_violation() const
  {
    double worst = 0.0;
    for (const auto& v : m) worst = std::max(worst, std::abs(norm(v) - 1.0));
    return worst;
  }

  void check(double tol = 1e-12) const
  {
    if (m.size() != grid.size()) throw Error(ErrorKind::InvalidProfile, "profile size must match the grid");
    if (max_unit_violation() > tol) throw Error(ErrorKind::NonUnitVector, "|m_i| = 1 violated");
  }
};

/// A converged travelling wave m(x - V t).
struct TWSolution {
  PolarProfile profile;
  double V = 0.0;
  Params params;
  double residual_norm = 0.0;
  Regime regime;
  int iterations = 0;
};

inline CartesianProfile to_cartesian(const PolarProfile& p)
{
  CartesianProfile c(p.grid);
  for (std::size_t i = 0; i < p.size(); ++i) c.m[i] = direction(p.psi[i], p.beta[i]);
  return c;
}

/// Polar angles of a unit vector; beta taken on the branch nearest `beta_hint`.
inline Angles to_angles(const Vec3& m, double beta_hint = 0.0)
{
  Angles a;
  a.psi = std::atan2(std::hypot(m.x, m.z), m.y);
  double b = std::atan2(m.z, m.x);
  b += 2.0 * pi * std::round((beta_hint - b) / (2.0 * pi));
  a.beta = b;
  return a;
}

/// Inverse of to_cartesian. beta is unwrapped along the grid starting from
/// the branch nearest `minus.beta`.
inline PolarProfile to_polar(const CartesianProfile& c, const Angles& minus, const Angles& plus)
{
  PolarProfile p(c.grid);
  double hint = minus.beta;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Angles a = to_angles(c.m[i], hint);
    p.psi[i] = a.psi;
    p.beta[i] = a.beta;
    hint = a.beta;
  }
  p.minus = minus;
  p.plus = plus;
  return p;
}

}  // namespace llgtw

#endif  // LLGTW_MODEL_HPP

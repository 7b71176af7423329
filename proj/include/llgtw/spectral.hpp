#ifndef LLGTW_SPECTRAL_HPP
#define LLGTW_SPECTRAL_HPP

// Finite-difference Schrodinger operators -d^2/dxi^2 + W(xi) on a truncated
// line with Dirichlet ends, and the small eigen/Rayleigh toolkit used to
// check their lower bounds and kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "llgtw/band_lu.hpp"
#include "llgtw/model.hpp"
#include "llgtw/staticsol.hpp"

namespace llgtw {

/// Symmetric tridiagonal -D2 + diag(W) on the interior nodes of a grid.
/// Boundary nodes carry the Dirichlet condition phi = 0.
struct SchrodingerOp {
  double h = 1.0;
  std::vector<double> xi;  // interior node coordinates
  std::vector<double> W;   // potential at the interior nodes

  std::size_t size() const { return W.size(); }
  double diag(std::size_t i) const { return 2.0 / (h * h) + W[i]; }
  double off() const { return -1.0 / (h * h); }

  /// A + c.
  SchrodingerOp shifted(double c) const
  {
    SchrodingerOp s = *this;
    for (double& w : s.W) w += c;
    return s;
  }

  /// The operator on the nodes with lo <= xi <= hi, Dirichlet outside.
  SchrodingerOp restricted(double lo, double hi) const
  {
    SchrodingerOp s;
    s.h = h;
    for (std::size_t i = 0; i < size(); ++i) {
      if (xi[i] >= lo && xi[i] <= hi) {
        s.xi.push_back(xi[i]);
        s.W.push_back(W[i]);
      }
    }
    return s;
  }

  std::vector<double> apply(const std::vector<double>& phi) const
  {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = diag(i) * phi[i];
      if (i > 0) s += off() * phi[i - 1];
      if (i + 1 < n) s += off() * phi[i + 1];
      y[i] = s;
    }
    return y;
  }

  /// Discrete L2 inner product h sum f g.
  double inner(const std::vector<double>& f, const std::vector<double>& g) const
  {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
    return h * s;
  }

  static SchrodingerOp from_potential(const Grid& grid, const std::vector<double>& w_full)
  {
    SchrodingerOp op;
    op.h = grid.h();
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      op.xi.push_back(grid.xi(i));
      op.W.push_back(w_full[i]);
    }
    return op;
  }
};

/// L = -d^2 + 1 - 2 sech^2(xi), the linearization about the Bloch wall.
inline SchrodingerOp potential_L(const Grid& grid)
{
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = 1.0 / std::cosh(grid.xi(i));
    w[i] = 1.0 - 2.0 * s * s;
  }
  return SchrodingerOp::from_potential(grid, w);
}

/// M = -d^2 + cos 2 beta_T + H3 sin beta_T.
inline SchrodingerOp potential_M(double H3, const Grid& grid)
{
  const auto bt = transverse_beta(H3, grid);
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) w[i] = std::cos(2.0 * bt[i]) + H3 * std::sin(bt[i]);
  return SchrodingerOp::from_potential(grid, w);
}

/// N = -d^2 + cos 2 beta_T + 3 H3 sin beta_T - H3^2; equal to
/// (cos beta_T)''/cos beta_T + 1 but regular where cos beta_T = 0.
inline SchrodingerOp potential_N(double H3, const Grid& grid)
{
  const auto bt = transverse_beta(H3, grid);
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    w[i] = std::cos(2.0 * bt[i]) + 3.0 * H3 * std::sin(bt[i]) - H3 * H3;
  }
  return SchrodingerOp::from_potential(grid, w);
}

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // interior nodes, h sum v^2 = 1
};

namespace detail {

// Number of eigenvalues strictly below x (Sturm count via LDL' pivots).
inline std::size_t sturm_count(const SchrodingerOp& op, double x)
{
  const double b2 = op.off() * op.off();
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < op.size(); ++i) {
    d = op.diag(i) - x - (i > 0 ? b2 / d : 0.0);
    if (std::abs(d) < tiny) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

inline double kth_eigenvalue(const SchrodingerOp& op, std::size_t k)
{
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < op.size(); ++i) {
    const double r = (i > 0 ? std::abs(op.off()) : 0.0) + (i + 1 < op.size() ? std::abs(op.off()) : 0.0);
    lo = std::min(lo, op.diag(i) - r);
    hi = std::max(hi, op.diag(i) + r);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(op, mid) > k) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

inline void normalize_and_orient(const SchrodingerOp& op, std::vector<double>& v)
{
  const double nrm = std::sqrt(op.inner(v, v));
  std::size_t imax = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[imax]) * (1.0 + 1e-12)) imax = i;
  }
  const double s = v[imax] < 0.0 ? -1.0 / nrm : 1.0 / nrm;
  for (double& x : v) x *= s;
}

}  // namespace detail

/// The k smallest eigenpairs in increasing order: Sturm bisection for the
/// values, shifted inverse iteration for the vectors.
inline std::vector<EigenPair> lowest_eigenpairs(const SchrodingerOp& op, std::size_t k)
{
  if (k == 0) throw Error(ErrorKind::Config, "lowest_eigenpairs requires k >= 1");
  k = std::min(k, op.size());
  std::vector<EigenPair> out;
  const double scale = 4.0 / (op.h * op.h);
  for (std::size_t j = 0; j < k; ++j) {
    EigenPair ep;
    ep.value = detail::kth_eigenvalue(op, j);

    BandMatrix t(op.size(), 1, 1);
    const double sigma = ep.value + 1e-10 * scale;
    for (std::size_t i = 0; i < op.size(); ++i) {
      t(i, i) = op.diag(i) - sigma;
      if (i > 0) t(i, i - 1) = op.off();
      if (i + 1 < op.size()) t(i, i + 1) = op.off();
    }
    const BandLU lu(std::move(t));
    std::vector<double> v(op.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.1 * std::sin(0.37 * static_cast<double>(i));
    for (int it = 0; it < 4; ++it) {
      for (const auto& prev : out) {
        const double c = op.inner(prev.vector, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * prev.vector[i];
      }
      lu.solve_in_place(v);
      detail::normalize_and_orient(op, v);
    }
    ep.vector = std::move(v);
    out.push_back(std::move(ep));
  }
  return out;
}

/// |<f, g>| / (|f| |g|).
inline double cosine_similarity(const std::vector<double>& f, const std::vector<double>& g)
{
  double fg = 0.0, ff = 0.0, gg = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    fg += f[i] * g[i];
    ff += f[i] * f[i];
    gg += g[i] * g[i];
  }
  return std::abs(fg) / std::sqrt(ff * gg);
}

struct RayleighReport {
  double bound = 0.0;
  double tolerance = 0.0;
  int trials = 0;
  double min_quotient = std::numeric_limits<double>::infinity();
  int argmin = -1;
  std::vector<double> minimizer;
  bool passed = false;
};

/// Random smooth compactly supported test function: a sum of 1-4 C-infinity
/// bumps exp(-1/(1 - t^2)) with random centres, widths and amplitudes.
inline std::vector<double> random_bump_function(const std::vector<double>& xi, std::mt19937_64& rng)
{
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> centre(-6.0, 6.0);
  std::uniform_real_distribution<double> width(0.5, 8.0);
  std::normal_distribution<double> amp(0.0, 1.0);
  std::vector<double> phi(xi.size(), 0.0);
  const int m = count(rng);
  for (int j = 0; j < m; ++j) {
    const double c = centre(rng), s = width(rng), a = amp(rng);
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const double t = (xi[i] - c) / s;
      if (std::abs(t) < 1.0) phi[i] += a * std::exp(-1.0 / (1.0 - t * t));
    }
  }
  return phi;
}

/// Minimum of <phi, A phi>/<phi, phi> over `trials` random bump functions.
inline RayleighReport rayleigh_bound_check(const SchrodingerOp& op, double bound, int trials,
                                           std::uint64_t seed = 20240917, double tolerance = 1e-6)
{
  RayleighReport rep;
  rep.bound = bound;
  rep.tolerance = tolerance;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    auto phi = random_bump_function(op.xi, rng);
    const double nn = op.inner(phi, phi);
    if (nn == 0.0) continue;
    const double q = op.inner(phi, op.apply(phi)) / nn;
    if (q < rep.min_quotient) {
      rep.min_quotient = q;
      rep.argmin = t;
      rep.minimizer = std::move(phi);
    }
  }
  rep.passed = rep.min_quotient >= bound - tolerance;
  return rep;
}

/// Embeds interior-node values into a full-grid vector with zero ends.
inline std::vector<double> with_dirichlet_ends(const std::vector<double>& interior)
{
  std::vector<double> full(interior.size() + 2, 0.0);
  std::copy(interior.begin(), interior.end(), full.begin() + 1);
  return full;
}

}  // namespace llgtw

#endif  // LLGTW_SPECTRAL_HPP

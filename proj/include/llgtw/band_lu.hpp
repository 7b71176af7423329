#ifndef LLGTW_BAND_LU_HPP
#define LLGTW_BAND_LU_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "llgtw/error.hpp"

namespace llgtw {

/// Square band matrix with kl sub- and ku super-diagonals. Storage keeps room
/// for the kl extra super-diagonals created by partial pivoting.
class BandMatrix {
public:
  BandMatrix() = default;
  BandMatrix(std::size_t n, std::size_t kl, std::size_t ku)
      : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), data_(n * width_, 0.0)
  {
  }

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const
  {
    return j + kl_ >= i && j <= i + ku_ + kl_;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * width_ + (j + kl_ - i)]; }
  double operator()(std::size_t i, std::size_t j) const
  {
    return in_band(i, j) ? data_[i * width_ + (j + kl_ - i)] : 0.0;
  }

  std::size_t row_begin(std::size_t i) const { return i > kl_ ? i - kl_ : 0; }
  std::size_t row_end(std::size_t i) const { return std::min(n_, i + ku_ + 1); }

  std::vector<double> apply(const std::vector<double>& x) const
  {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = row_begin(i); j < row_end(i); ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  std::vector<double> apply_transposed(const std::vector<double>& x) const
  {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = row_begin(i); j < row_end(i); ++j) y[j] += (*this)(i, j) * x[i];
    }
    return y;
  }

private:
  friend class BandLU;
  std::size_t n_ = 0, kl_ = 0, ku_ = 0, width_ = 1;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting of a BandMatrix, O(n kl (kl + ku)).
class BandLU {
public:
  explicit BandLU(BandMatrix a) : lu_(std::move(a)), piv_(lu_.size())
  {
    const std::size_t n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
    double scale = 0.0;
    for (double v : lu_.data_) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t last = std::min(n - 1, k + kl);
      std::size_t p = k;
      for (std::size_t i = k + 1; i <= last; ++i) {
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      }
      piv_[k] = p;
      const std::size_t jend = std::min(n - 1, k + ku + kl);
      if (p != k) {
        for (std::size_t j = k; j <= jend; ++j) std::swap(lu_(k, j), lu_(p, j));
      }
      const double pivot = lu_(k, k);
      if (pivot == 0.0 || std::abs(pivot) < 1e-300 * std::max(scale, 1.0)) {
        throw Error(ErrorKind::NoConvergence, "singular band matrix");
      }
      for (std::size_t i = k + 1; i <= last; ++i) {
        const double l = lu_(i, k) / pivot;
        lu_(i, k) = l;
        if (l == 0.0) continue;
        for (std::size_t j = k + 1; j <= jend; ++j) lu_(i, j) -= l * lu_(k, j);
      }
    }
  }

  std::size_t size() const { return lu_.n_; }

  void solve_in_place(std::vector<double>& b) const
  {
    const std::size_t n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
    for (std::size_t k = 0; k < n; ++k) {
      if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
      const std::size_t last = std::min(n - 1, k + kl);
      for (std::size_t i = k + 1; i <= last; ++i) b[i] -= lu_(i, k) * b[k];
    }
    for (std::size_t ii = n; ii-- > 0;) {
      const std::size_t jend = std::min(n - 1, ii + kl + ku);
      double s = b[ii];
      for (std::size_t j = ii + 1; j <= jend; ++j) s -= lu_(ii, j) * b[j];
      b[ii] = s / lu_(ii, ii);
    }
  }

  /// Solves A^T x = b.
  void solve_transposed_in_place(std::vector<double>& b) const
  {
    const std::size_t n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t jbeg = i > kl + ku ? i - kl - ku : 0;
      double s = b[i];
      for (std::size_t j = jbeg; j < i; ++j) s -= lu_(j, i) * b[j];
      b[i] = s / lu_(i, i);
    }
    for (std::size_t kk = n; kk-- > 0;) {
      const std::size_t last = std::min(n - 1, kk + kl);
      double s = b[kk];
      for (std::size_t i = kk + 1; i <= last; ++i) s -= lu_(i, kk) * b[i];
      b[kk] = s;
      if (piv_[kk] != kk) std::swap(b[kk], b[piv_[kk]]);
    }
  }

private:
  BandMatrix lu_;
  std::vector<std::size_t> piv_;
};

/// Band matrix bordered by one dense column, one dense row and a corner:
///   [ A  c ]
///   [ r' d ]
struct BorderedMatrix {
  BandMatrix band;
  std::vector<double> col;
  std::vector<double> row;
  double corner = 0.0;

  BorderedMatrix() = default;
  BorderedMatrix(std::size_t n, std::size_t kl, std::size_t ku) : band(n, kl, ku), col(n, 0.0), row(n, 0.0) {}

  std::size_t size() const { return band.size() + 1; }

  std::vector<double> apply(const std::vector<double>& x) const
  {
    const std::size_t n = band.size();
    std::vector<double> xs(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    auto y = band.apply(xs);
    double last = corner * x[n];
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += col[i] * x[n];
      last += row[i] * x[i];
    }
    y.push_back(last);
    return y;
  }

  std::vector<double> apply_transposed(const std::vector<double>& x) const
  {
    const std::size_t n = band.size();
    std::vector<double> xs(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    auto y = band.apply_transposed(xs);
    double last = corner * x[n];
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += row[i] * x[n];
      last += col[i] * x[i];
    }
    y.push_back(last);
    return y;
  }

  /// Row-major dense copy, for inspection and tests.
  std::vector<std::vector<double>> dense() const
  {
    const std::size_t n = band.size();
    std::vector<std::vector<double>> d(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = band.row_begin(i); j < band.row_end(i); ++j) d[i][j] = band(i, j);
      d[i][n] = col[i];
      d[n][i] = row[i];
    }
    d[n][n] = corner;
    return d;
  }
};

/// Bordered elimination on top of a banded LU, with one step of iterative
/// refinement against the unfactored matrix.
class BorderedSolver {
public:
  explicit BorderedSolver(const BorderedMatrix& m) : m_(m), lu_(m.band)
  {
    y_col_ = m.col;
    lu_.solve_in_place(y_col_);
    y_row_ = m.row;
    lu_.solve_transposed_in_place(y_row_);
    double rc = 0.0, cr = 0.0;
    for (std::size_t i = 0; i < y_col_.size(); ++i) {
      rc += m.row[i] * y_col_[i];
      cr += m.col[i] * y_row_[i];
    }
    schur_ = m.corner - rc;
    schur_t_ = m.corner - cr;
    if (schur_ == 0.0 || !std::isfinite(schur_)) throw Error(ErrorKind::NoConvergence, "singular bordered system");
  }

  std::vector<double> solve(const std::vector<double>& rhs) const
  {
    auto x = solve_once(rhs);
    const auto ax = m_.apply(x);
    std::vector<double> res(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) res[i] = rhs[i] - ax[i];
    const auto dx = solve_once(res);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    return x;
  }

  std::vector<double> solve_transposed(const std::vector<double>& rhs) const
  {
    auto x = solve_transposed_once(rhs);
    const auto ax = m_.apply_transposed(x);
    std::vector<double> res(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) res[i] = rhs[i] - ax[i];
    const auto dx = solve_transposed_once(res);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    return x;
  }

private:
  std::vector<double> solve_once(const std::vector<double>& rhs) const
  {
    const std::size_t n = m_.band.size();
    std::vector<double> y(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(n));
    lu_.solve_in_place(y);
    double ry = 0.0;
    for (std::size_t i = 0; i < n; ++i) ry += m_.row[i] * y[i];
    const double v = (rhs[n] - ry) / schur_;
    for (std::size_t i = 0; i < n; ++i) y[i] -= v * y_col_[i];
    y.push_back(v);
    return y;
  }

  std::vector<double> solve_transposed_once(const std::vector<double>& rhs) const
  {
    const std::size_t n = m_.band.size();
    std::vector<double> y(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(n));
    lu_.solve_transposed_in_place(y);
    double cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) cy += m_.col[i] * y[i];
    const double v = (rhs[n] - cy) / schur_t_;
    for (std::size_t i = 0; i < n; ++i) y[i] -= v * y_row_[i];
    y.push_back(v);
    return y;
  }

  BorderedMatrix m_;
  BandLU lu_;
  std::vector<double> y_col_, y_row_;
  double schur_ = 0.0, schur_t_ = 0.0;
};

}  // namespace llgtw

#endif  // LLGTW_BAND_LU_HPP

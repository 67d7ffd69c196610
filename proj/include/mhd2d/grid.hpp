#pragma once

#include <cstddef>
#include <numbers>

namespace mhd2d {

// Square periodic grid with n points per axis and period L.
//
// Physical values are stored row-major as f[i1 * n + i2] at y = (i1 h, i2 h).
// Spectral coefficients use the real-to-complex half layout: row i1 covers
// the full mode range of axis 1, column i2 in [0, n/2] the non-negative
// modes of axis 2.
class Grid {
 public:
  explicit Grid(int n, double period = 2.0 * std::numbers::pi);

  int n() const noexcept { return n_; }
  int columns() const noexcept { return n_ / 2 + 1; }
  double period() const noexcept { return period_; }
  double spacing() const noexcept { return period_ / n_; }
  std::size_t point_count() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  std::size_t mode_count() const noexcept {
    return static_cast<std::size_t>(n_) * columns();
  }

  // Integer mode index of a spectral row, in [-n/2, n/2).
  int mode1(int row) const noexcept { return row < n_ / 2 ? row : row - n_; }
  int mode2(int col) const noexcept { return col; }
  double k1(int row) const noexcept { return base_ * mode1(row); }
  double k2(int col) const noexcept { return base_ * col; }
  double k_squared(int row, int col) const noexcept {
    const double a = k1(row), b = k2(col);
    return a * a + b * b;
  }
  // Row holding mode -m1 for the row holding m1.
  int conjugate_row(int row) const noexcept { return (n_ - row) % n_; }

  // 2/3-rule: modes with 3|m| < n survive every nonlinear product.
  int cutoff() const noexcept { return (n_ - 1) / 3; }
  bool retained(int row, int col) const noexcept;
  bool nyquist(int row, int col) const noexcept {
    return row == n_ / 2 || col == n_ / 2;
  }
  // Multiplicity of a stored column in the full spectrum.
  double column_weight(int col) const noexcept {
    return (col == 0 || col == n_ / 2) ? 1.0 : 2.0;
  }
  double area() const noexcept { return period_ * period_; }

  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * columns() + col;
  }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.period_ == b.period_;
  }

 private:
  int n_;
  double period_;
  double base_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* operation);

}  // namespace mhd2d

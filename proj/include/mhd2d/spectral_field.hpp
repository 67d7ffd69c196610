#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "mhd2d/grid.hpp"

namespace mhd2d {

using Complex = std::complex<double>;

// Fourier coefficients of a real periodic scalar field, normalized so that
// f(y) = sum_k c_k exp(i k.y). Only the half spectrum is stored; the other
// half follows from Hermitian symmetry.
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  Complex& operator()(int row, int col) noexcept { return coeffs_[grid_.index(row, col)]; }
  const Complex& operator()(int row, int col) const noexcept {
    return coeffs_[grid_.index(row, col)];
  }

  // Zero mode, i.e. the spatial mean.
  Complex mean() const noexcept { return coeffs_[0]; }
  void set_mean(double value) noexcept { coeffs_[0] = value; }

  void set_zero() noexcept;
  // Zero every mode outside the 2/3 band (Nyquist included).
  void truncate() noexcept;
  // Zero only Nyquist row/column.
  void drop_nyquist() noexcept;
  bool band_limited() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s) noexcept;
  // this += s * other
  SpectralField& axpy(double s, const SpectralField& other);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  SpectralField operator-() const {
    SpectralField r(*this);
    r *= -1.0;
    return r;
  }

  double max_abs_difference(const SpectralField& other) const;

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

// Two-component field, e.g. displacement or velocity.
class VectorField {
 public:
  explicit VectorField(const Grid& grid) : comp_{SpectralField(grid), SpectralField(grid)} {}
  VectorField(SpectralField a, SpectralField b);

  const Grid& grid() const noexcept { return comp_[0].grid(); }
  SpectralField& operator[](int i) noexcept { return comp_[i]; }
  const SpectralField& operator[](int i) const noexcept { return comp_[i]; }

  void set_zero() noexcept {
    comp_[0].set_zero();
    comp_[1].set_zero();
  }
  void truncate() noexcept {
    comp_[0].truncate();
    comp_[1].truncate();
  }
  void zero_mean() noexcept {
    comp_[0].set_mean(0.0);
    comp_[1].set_mean(0.0);
  }

  VectorField& operator+=(const VectorField& o) {
    comp_[0] += o.comp_[0];
    comp_[1] += o.comp_[1];
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    comp_[0] -= o.comp_[0];
    comp_[1] -= o.comp_[1];
    return *this;
  }
  VectorField& operator*=(double s) noexcept {
    comp_[0] *= s;
    comp_[1] *= s;
    return *this;
  }
  VectorField& axpy(double s, const VectorField& o) {
    comp_[0].axpy(s, o.comp_[0]);
    comp_[1].axpy(s, o.comp_[1]);
    return *this;
  }
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }

  double max_abs_difference(const VectorField& other) const {
    const double a = comp_[0].max_abs_difference(other.comp_[0]);
    const double b = comp_[1].max_abs_difference(other.comp_[1]);
    return a > b ? a : b;
  }

 private:
  std::array<SpectralField, 2> comp_;
};

// Point values of a real field on the physical grid.
struct RealField {
  explicit RealField(const Grid& g) : grid(g), values(g.point_count(), 0.0) {}
  Grid grid;
  std::vector<double> values;

  double& operator()(int i1, int i2) noexcept {
    return values[static_cast<std::size_t>(i1) * grid.n() + i2];
  }
  double operator()(int i1, int i2) const noexcept {
    return values[static_cast<std::size_t>(i1) * grid.n() + i2];
  }
  double max_abs() const noexcept;
};

}  // namespace mhd2d

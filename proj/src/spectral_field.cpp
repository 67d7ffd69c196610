#include "mhd2d/spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "mhd2d/error.hpp"

namespace mhd2d {

SpectralField::SpectralField(const Grid& grid) : grid_(grid), coeffs_(grid.mode_count()) {}

void SpectralField::set_zero() noexcept { std::fill(coeffs_.begin(), coeffs_.end(), Complex{}); }

void SpectralField::truncate() noexcept {
  const int n = grid_.n();
  const int cols = grid_.columns();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!grid_.retained(r, c)) coeffs_[grid_.index(r, c)] = Complex{};
    }
  }
}

void SpectralField::drop_nyquist() noexcept {
  const int n = grid_.n();
  const int cols = grid_.columns();
  for (int c = 0; c < cols; ++c) coeffs_[grid_.index(n / 2, c)] = Complex{};
  for (int r = 0; r < n; ++r) coeffs_[grid_.index(r, n / 2)] = Complex{};
}

bool SpectralField::band_limited() const noexcept {
  const int n = grid_.n();
  const int cols = grid_.columns();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!grid_.retained(r, c) && coeffs_[grid_.index(r, c)] != Complex{}) return false;
    }
  }
  return true;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "add");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "subtract");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) noexcept {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "axpy");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
  return *this;
}

double SpectralField::max_abs_difference(const SpectralField& other) const {
  require_same_grid(grid_, other.grid_, "compare");
  double m = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) m = std::max(m, std::abs(coeffs_[i] - other.coeffs_[i]));
  return m;
}

VectorField::VectorField(SpectralField a, SpectralField b) : comp_{std::move(a), std::move(b)} {
  require_same_grid(comp_[0].grid(), comp_[1].grid(), "vector field");
}

double RealField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace mhd2d

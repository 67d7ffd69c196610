#pragma once

#include <span>

#include "mhd2d/spectral_field.hpp"

namespace mhd2d {

enum class Truncation { none, dealias };

// Coefficients -> point values. `out` must hold grid.point_count() doubles.
void to_physical(const SpectralField& f, std::span<double> out);
RealField to_physical(const SpectralField& f);

// Point values -> coefficients. With Truncation::dealias every mode outside
// the 2/3 band is zeroed; with Truncation::none only the Nyquist modes are.
void to_spectral(std::span<const double> values, SpectralField& out,
                 Truncation mode = Truncation::dealias);
SpectralField to_spectral(const RealField& f, Truncation mode = Truncation::dealias);

}  // namespace mhd2d

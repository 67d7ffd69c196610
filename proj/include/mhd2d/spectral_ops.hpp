#pragma once

#include "mhd2d/spectral_field.hpp"

namespace mhd2d {

// Multiply every coefficient by (i k_axis)^order. Axis is 1 or 2.
SpectralField derivative(const SpectralField& f, int axis, int order = 1);
VectorField derivative(const VectorField& f, int axis, int order = 1);

SpectralField laplacian(const SpectralField& f);
VectorField laplacian(const VectorField& f);
SpectralField divergence(const VectorField& f);
VectorField gradient(const SpectralField& f);
// Scalar curl d1 f2 - d2 f1.
SpectralField curl(const VectorField& f);

// Pointwise product with 2/3-rule truncation of the result.
SpectralField dealias_product(const SpectralField& f, const SpectralField& g);

// Integral over the periodic cell of f*g.
double inner_product(const SpectralField& f, const SpectralField& g);
double inner_product(const VectorField& f, const VectorField& g);

// (sum_{|alpha|<=s} ||d^alpha f||_0^2)^{1/2}; multi-indices counted once each.
double sobolev_norm(const SpectralField& f, int s);
double sobolev_norm(const VectorField& f, int s);
// ||nabla^s f||_0: only |alpha| == s.
double sobolev_seminorm(const SpectralField& f, int s);
double sobolev_seminorm(const VectorField& f, int s);
// ||f||_{s,2} = sqrt(||f||_{s-1}^2 + ||nabla^{s-1} d2 f||_0^2), s >= 1.
double anisotropic_norm(const SpectralField& f, int s);
double anisotropic_norm(const VectorField& f, int s);

// Squared variants avoid a sqrt/square round trip in energy bookkeeping.
double sobolev_norm_sq(const SpectralField& f, int s);
double sobolev_norm_sq(const VectorField& f, int s);

// Orthogonal projection onto divergence-free fields; zero mode untouched.
VectorField leray_project(const VectorField& u);

// Solve Laplacian(result) = f with result mean set to `mean`.
// Throws SolvabilityError when |mean(f)| >= mean_tolerance * ||f||_0.
SpectralField invert_laplacian(const SpectralField& f, double mean = 0.0,
                               double mean_tolerance = 1e-10);

}  // namespace mhd2d

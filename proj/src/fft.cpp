#include "mhd2d/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "mhd2d/error.hpp"

namespace mhd2d {
namespace {

// FFTW_ESTIMATE keeps plan selection deterministic, so repeated runs give
// bit-identical output.
struct Plans {
  explicit Plans(int n) {
    const std::size_t points = static_cast<std::size_t>(n) * n;
    const std::size_t modes = static_cast<std::size_t>(n) * (n / 2 + 1);
    double* real = fftw_alloc_real(points);
    fftw_complex* spec = fftw_alloc_complex(modes);
    forward = fftw_plan_dft_r2c_2d(n, n, real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_2d(n, n, spec, real, FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(spec);
  }
  ~Plans() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;

  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const Plans& plans_for(int n) {
  static std::map<int, std::unique_ptr<Plans>> cache;
  std::lock_guard lock(planner_mutex());
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Plans>(n);
  return *slot;
}

// Aligned per-thread buffers so the cached plans can run on them.
struct Scratch {
  explicit Scratch(int n)
      : real(fftw_alloc_real(static_cast<std::size_t>(n) * n)),
        spec(fftw_alloc_complex(static_cast<std::size_t>(n) * (n / 2 + 1))) {}
  ~Scratch() {
    fftw_free(real);
    fftw_free(spec);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  double* real;
  fftw_complex* spec;
};

Scratch& scratch_for(int n) {
  thread_local std::map<int, std::unique_ptr<Scratch>> buffers;
  auto& slot = buffers[n];
  if (!slot) slot = std::make_unique<Scratch>(n);
  return *slot;
}

}  // namespace

void to_physical(const SpectralField& f, std::span<double> out) {
  const Grid& g = f.grid();
  if (out.size() != g.point_count()) throw StructuralError("to_physical: output size mismatch");
  const Plans& p = plans_for(g.n());
  Scratch& s = scratch_for(g.n());
  std::memcpy(s.spec, f.coeffs().data(), g.mode_count() * sizeof(fftw_complex));
  fftw_execute_dft_c2r(p.backward, s.spec, s.real);
  std::memcpy(out.data(), s.real, g.point_count() * sizeof(double));
}

RealField to_physical(const SpectralField& f) {
  RealField r(f.grid());
  to_physical(f, r.values);
  return r;
}

void to_spectral(std::span<const double> values, SpectralField& out, Truncation mode) {
  const Grid& g = out.grid();
  if (values.size() != g.point_count()) throw StructuralError("to_spectral: input size mismatch");
  const Plans& p = plans_for(g.n());
  Scratch& s = scratch_for(g.n());
  std::memcpy(s.real, values.data(), g.point_count() * sizeof(double));
  fftw_execute_dft_r2c(p.forward, s.real, s.spec);
  const double scale = 1.0 / static_cast<double>(g.point_count());
  auto coeffs = out.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] = Complex(s.spec[i][0] * scale, s.spec[i][1] * scale);
  }
  if (mode == Truncation::dealias) {
    out.truncate();
  } else {
    out.drop_nyquist();
  }
}

SpectralField to_spectral(const RealField& f, Truncation mode) {
  SpectralField out(f.grid);
  to_spectral(f.values, out, mode);
  return out;
}

}  // namespace mhd2d

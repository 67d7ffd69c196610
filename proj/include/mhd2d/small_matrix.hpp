#pragma once

#include <array>
#include <complex>

namespace mhd2d {

using Mat2 = std::array<std::array<std::complex<double>, 2>, 2>;

inline Mat2 mat2_identity() { return Mat2{{{1.0, 0.0}, {0.0, 1.0}}}; }

inline std::array<std::complex<double>, 2> apply(const Mat2& a,
                                                 const std::array<std::complex<double>, 2>& x) {
  return {a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]};
}

Mat2 multiply(const Mat2& a, const Mat2& b);

// exp(h M) together with phi_1..phi_3 of h M, where
// phi_0(z) = e^z and phi_{j+1}(z) = (phi_j(z) - 1/j!) / z.
struct PhiFunctions {
  Mat2 exp;
  Mat2 phi1;
  Mat2 phi2;
  Mat2 phi3;
};

// Evaluated through the exponential of a block-companion matrix, so the
// result is smooth across singular or defective M. A diagonal similarity
// balances the off-diagonal entries first.
PhiFunctions phi_functions(const Mat2& m, double h);

}  // namespace mhd2d

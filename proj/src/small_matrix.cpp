#include "mhd2d/small_matrix.hpp"

#include <cmath>
#include <vector>

namespace mhd2d {
namespace {

using C = std::complex<double>;

// Dense square matrix small enough for naive products.
struct Dense {
  explicit Dense(int n) : n(n), a(static_cast<std::size_t>(n) * n) {}
  int n;
  std::vector<C> a;
  C& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  C operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

Dense product(const Dense& x, const Dense& y) {
  Dense r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const C xik = x(i, k);
      if (xik == C{}) continue;
      for (int j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

double one_norm(const Dense& x) {
  double best = 0.0;
  for (int j = 0; j < x.n; ++j) {
    double s = 0.0;
    for (int i = 0; i < x.n; ++i) s += std::abs(x(i, j));
    best = std::max(best, s);
  }
  return best;
}

// Scaling and squaring with a truncated Taylor series; after scaling the
// norm is below 1/2 so 20 terms are far past double precision.
Dense expm(Dense x) {
  const double norm = one_norm(x);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const double scale = std::ldexp(1.0, -squarings);
  for (auto& v : x.a) v *= scale;

  Dense result(x.n), term(x.n);
  for (int i = 0; i < x.n; ++i) {
    result(i, i) = 1.0;
    term(i, i) = 1.0;
  }
  for (int k = 1; k <= 20; ++k) {
    term = product(term, x);
    for (auto& v : term.a) v /= static_cast<double>(k);
    for (std::size_t i = 0; i < result.a.size(); ++i) result.a[i] += term.a[i];
  }
  for (int s = 0; s < squarings; ++s) result = product(result, result);
  return result;
}

}  // namespace

Mat2 multiply(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

PhiFunctions phi_functions(const Mat2& m, double h) {
  // D M D^{-1} with D = diag(s, 1) equalizes |M01| and |M10|.
  double s = 1.0;
  const double a01 = std::abs(m[0][1]), a10 = std::abs(m[1][0]);
  if (a01 > 0.0 && a10 > 0.0) s = std::sqrt(a10 / a01);
  Mat2 bal = m;
  bal[0][1] *= s;
  bal[1][0] /= s;

  constexpr int blocks = 4;
  Dense w(2 * blocks);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) w(i, j) = h * bal[i][j];
  for (int b = 0; b + 1 < blocks; ++b) {
    w(2 * b, 2 * (b + 1)) = 1.0;
    w(2 * b + 1, 2 * (b + 1) + 1) = 1.0;
  }
  const Dense e = expm(w);

  auto block = [&](int b) {
    Mat2 out{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out[i][j] = e(i, 2 * b + j);
    // undo the similarity
    out[0][1] /= s;
    out[1][0] *= s;
    return out;
  };
  return PhiFunctions{block(0), block(1), block(2), block(3)};
}

}  // namespace mhd2d

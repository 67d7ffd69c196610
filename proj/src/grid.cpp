#include "mhd2d/grid.hpp"

#include <cstdlib>
#include <string>

#include "mhd2d/error.hpp"

namespace mhd2d {

Grid::Grid(int n, double period) : n_(n), period_(period), base_(0.0) {
  if (n < 8 || n % 2 != 0) {
    throw StructuralError("grid size must be even and >= 8, got " + std::to_string(n));
  }
  if (!(period > 0.0)) {
    throw StructuralError("grid period must be positive");
  }
  base_ = 2.0 * std::numbers::pi / period_;
}

bool Grid::retained(int row, int col) const noexcept {
  const int c = cutoff();
  return std::abs(mode1(row)) <= c && col <= c;
}

void require_same_grid(const Grid& a, const Grid& b, const char* operation) {
  if (!(a == b)) {
    throw StructuralError(std::string(operation) + ": grid mismatch (n=" + std::to_string(a.n()) +
                          " vs n=" + std::to_string(b.n()) + ")");
  }
}

}  // namespace mhd2d

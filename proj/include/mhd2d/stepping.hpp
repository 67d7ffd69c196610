#pragma once

#include "mhd2d/pressure.hpp"

namespace mhd2d {

enum class Scheme { etd_rk4, imex_bdf2 };

struct StepControl {
  double dt = 1e-3;
  Scheme scheme = Scheme::etd_rk4;
  // Only dealiased products are implemented; false is rejected.
  bool dealias = true;
  bool odevity_project = false;
  EllipticOptions elliptic;
  // The end-of-step projection runs against ||div_A u||_0 / ||u||_1; it is
  // tighter than the pressure tolerance so constraint drift cannot build up.
  double projection_tolerance = 1e-12;
};

}  // namespace mhd2d

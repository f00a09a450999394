#include "pffrac/tensors.hpp"

#include <string>

namespace pffrac {

SymTensor4 make_elasticity_tensor(double E, double nu, PlanarMode mode) {
  if (!(E > 0.0)) {
    throw ParameterError("make_elasticity_tensor: E must be positive, got " + std::to_string(E));
  }
  if (!(nu > -1.0 && nu < 0.5)) {
    throw ParameterError("make_elasticity_tensor: nu must lie in (-1, 0.5), got " +
                         std::to_string(nu));
  }

  double c1111 = 0.0, c1122 = 0.0, c2222 = 0.0, c1212 = 0.0;
  if (mode == PlanarMode::plane_stress) {
    c1111 = E / (1.0 - nu * nu);
    c1122 = (nu * E) / (1.0 - nu * nu);
    c2222 = E / (1.0 - nu * nu);
    c1212 = E / (2.0 * (1.0 + nu));
  } else {
    c1111 = (E * (1.0 - nu * nu)) / ((1.0 + nu) * (1.0 - nu - 2.0 * nu * nu));
    c1122 = (nu * E) / (1.0 - nu - 2.0 * nu * nu);
    c2222 = (E * (1.0 - nu)) / (1.0 - nu - 2.0 * nu * nu);
    c1212 = E / (2.0 * (1.0 + nu));
  }

  SymTensor4 c;
  c.m[0][0] = c1111;
  c.m[0][1] = c1122;
  c.m[1][0] = c1122;
  c.m[1][1] = c2222;
  c.m[2][2] = c1212;
  // C1112 = C2212 = 0: no normal-shear coupling for isotropy.
  return c;
}

}  // namespace pffrac

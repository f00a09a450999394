/** @file tensors.hpp
 *  @brief Symmetric 2D tensor algebra in Voigt notation.
 *
 *  Storage convention: a symmetric 2x2 tensor keeps its xy component as the
 *  tensor value (never the engineering double); a symmetric 4th-order tensor
 *  is a 3x3 Voigt matrix over the pair order (xx, yy, xy). The xy pair stands
 *  for both off-diagonal slots, so every full contraction weights that column
 *  by 2. The volumetric projector keeps the 1/3 factor of the 3D definition
 *  even in 2D; as a consequence P_vol is not idempotent here
 *  (P_vol P_vol = (2/3) P_vol) and P_dev images are not traceless.
 */
#pragma once

#include <array>
#include <cmath>

#include "pffrac/errors.hpp"

namespace pffrac {

enum class PlanarMode { plane_stress, plane_strain };

struct SymTensor2 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  friend SymTensor2 operator+(const SymTensor2& a, const SymTensor2& b) {
    return {a.xx + b.xx, a.yy + b.yy, a.xy + b.xy};
  }
  friend SymTensor2 operator-(const SymTensor2& a, const SymTensor2& b) {
    return {a.xx - b.xx, a.yy - b.yy, a.xy - b.xy};
  }
  friend SymTensor2 operator*(double a, const SymTensor2& t) {
    return {a * t.xx, a * t.yy, a * t.xy};
  }
  friend SymTensor2 operator-(const SymTensor2& t) { return {-t.xx, -t.yy, -t.xy}; }
};

inline double trace(const SymTensor2& t) { return t.xx + t.yy; }

inline SymTensor2 identity2() { return {1.0, 1.0, 0.0}; }

/// a : b with the off-diagonal counted twice.
inline double contract22(const SymTensor2& a, const SymTensor2& b) {
  return a.xx * b.xx + a.yy * b.yy + 2.0 * a.xy * b.xy;
}

inline double norm(const SymTensor2& t) { return std::sqrt(contract22(t, t)); }

struct SymTensor4 {
  // m[a][b]: component for Voigt pairs a,b in (xx, yy, xy) order.
  std::array<std::array<double, 3>, 3> m{};

  double& operator()(int a, int b) { return m[a][b]; }
  double operator()(int a, int b) const { return m[a][b]; }

  friend SymTensor4 operator+(const SymTensor4& a, const SymTensor4& b) {
    SymTensor4 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
    return r;
  }
  friend SymTensor4 operator-(const SymTensor4& a, const SymTensor4& b) {
    SymTensor4 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
    return r;
  }
  friend SymTensor4 operator*(double a, const SymTensor4& t) {
    SymTensor4 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = a * t.m[i][j];
    return r;
  }
};

/// Identity on symmetric tensors: I:e = e under contract42.
inline SymTensor4 identity4() {
  SymTensor4 r;
  r.m[0][0] = 1.0;
  r.m[1][1] = 1.0;
  r.m[2][2] = 0.5;
  return r;
}

/// (C : e)_ij = sum_kl C_ijkl e_kl; the xy column acts twice on e.xy.
inline SymTensor2 contract42(const SymTensor4& c, const SymTensor2& e) {
  SymTensor2 r;
  r.xx = c.m[0][0] * e.xx + c.m[0][1] * e.yy + 2.0 * c.m[0][2] * e.xy;
  r.yy = c.m[1][0] * e.xx + c.m[1][1] * e.yy + 2.0 * c.m[1][2] * e.xy;
  r.xy = c.m[2][0] * e.xx + c.m[2][1] * e.yy + 2.0 * c.m[2][2] * e.xy;
  return r;
}

/// Composition: (A B) : e = A : (B : e) for all e.
inline SymTensor4 compose44(const SymTensor4& a, const SymTensor4& b) {
  // The inner pair index runs over the full tensor, so the xy pair is
  // counted twice.
  constexpr std::array<double, 3> weight = {1.0, 1.0, 2.0};
  SymTensor4 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double sum = 0.0;
      for (int k = 0; k < 3; ++k) sum += a.m[i][k] * weight[k] * b.m[k][j];
      r.m[i][j] = sum;
    }
  }
  return r;
}

struct Projectors {
  SymTensor4 vol;
  SymTensor4 dev;
};

/// P_vol = (1/3)(I2 (x) I2), P_dev = I4_sym - P_vol.
inline Projectors projectors() {
  SymTensor4 vol;
  const double third = 1.0 / 3.0;
  vol.m[0][0] = third;
  vol.m[0][1] = third;
  vol.m[1][0] = third;
  vol.m[1][1] = third;
  Projectors p;
  p.vol = vol;
  p.dev = identity4() - vol;
  return p;
}

/// Isotropic plane-stress / plane-strain elasticity tensor.
SymTensor4 make_elasticity_tensor(double E, double nu, PlanarMode mode);

}  // namespace pffrac

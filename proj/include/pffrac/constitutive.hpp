/** @file constitutive.hpp
 *  @brief Pointwise material laws for the volumetric/deviatoric phase-field
 *         split: driving energy, degraded stress, modified tangent and the
 *         history update.
 *
 *  Branch selection is on tr(eps); for isotropic elasticity this agrees
 *  with the sign of the volumetric stress measure. The residual stiffness
 *  eta enters the stress and the tangent but never the driving energy.
 *
 *  Caveat: with the 2D volumetric projector the driving energy is nonzero
 *  under equibiaxial in-plane compression. That is a property of the model
 *  as defined, not a defect of this implementation.
 */
#pragma once

#include "pffrac/tensors.hpp"

namespace pffrac {

struct MaterialParams {
  double E = 0.0;
  double nu = 0.0;
  double Gc = 0.0;   // critical energy release rate
  double ls = 0.0;   // regularization length
  double eta = 0.0;  // residual stiffness
  PlanarMode mode = PlanarMode::plane_strain;

  // Derived, cached at construction.
  SymTensor4 C;
  SymTensor4 P_vol;
  SymTensor4 P_dev;
  SymTensor4 C_dev;  // P_dev C
  SymTensor4 C_vol;  // P_vol C

  static MaterialParams make(double E, double nu, double Gc, double ls, double eta,
                             PlanarMode mode);
};

/// Positive (tension/shear) part of the elastic energy density.
double psi_plus(const SymTensor2& eps, const MaterialParams& m);

/// Degraded stress. eps_branch selects the tension/compression branch and
/// is the previous iterate's strain inside the staggered scheme.
SymTensor2 stress(const SymTensor2& eps, const SymTensor2& eps_branch, double s,
                  const MaterialParams& m);

/// Modified stiffness: stress(x, eps_branch, s) = tangent_cmod(eps_branch, s) : x.
SymTensor4 tangent_cmod(const SymTensor2& eps_branch, double s, const MaterialParams& m);

/// Running maximum of the driving energy.
double update_history(double h_prev, double psi_now);

}  // namespace pffrac

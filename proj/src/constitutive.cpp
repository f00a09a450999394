#include "pffrac/constitutive.hpp"

#include <algorithm>
#include <string>

namespace pffrac {

MaterialParams MaterialParams::make(double E, double nu, double Gc, double ls, double eta,
                                    PlanarMode mode) {
  if (!(Gc > 0.0)) throw ParameterError("MaterialParams: Gc must be positive");
  if (!(ls > 0.0)) throw ParameterError("MaterialParams: ls must be positive");
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw ParameterError("MaterialParams: eta must lie in [0, 1), got " + std::to_string(eta));
  }

  MaterialParams m;
  m.E = E;
  m.nu = nu;
  m.Gc = Gc;
  m.ls = ls;
  m.eta = eta;
  m.mode = mode;
  m.C = make_elasticity_tensor(E, nu, mode);
  const Projectors p = projectors();
  m.P_vol = p.vol;
  m.P_dev = p.dev;
  m.C_dev = compose44(p.dev, m.C);
  m.C_vol = compose44(p.vol, m.C);
  return m;
}

double psi_plus(const SymTensor2& eps, const MaterialParams& m) {
  const SymTensor2 sigma_elas = contract42(m.C, eps);
  if (trace(eps) >= 0.0) {
    return 0.5 * contract22(eps, sigma_elas);
  }
  const SymTensor2 dev_sigma = contract42(m.P_dev, sigma_elas);
  const SymTensor2 dev_eps = contract42(m.P_dev, eps);
  return 0.5 * contract22(dev_sigma, dev_eps);
}

SymTensor2 stress(const SymTensor2& eps, const SymTensor2& eps_branch, double s,
                  const MaterialParams& m) {
  const SymTensor2 sigma_elas = contract42(m.C, eps);
  const double g = s * s + m.eta;
  if (trace(eps_branch) >= 0.0) {
    return g * sigma_elas;
  }
  const SymTensor2 dev = contract42(m.P_dev, sigma_elas);
  const SymTensor2 vol = contract42(m.P_vol, sigma_elas);
  return g * dev + vol;
}

SymTensor4 tangent_cmod(const SymTensor2& eps_branch, double s, const MaterialParams& m) {
  const double g = s * s + m.eta;
  if (trace(eps_branch) >= 0.0) {
    return g * m.C;
  }
  return g * m.C_dev + m.C_vol;
}

double update_history(double h_prev, double psi_now) {
  if (h_prev < 0.0 || psi_now < 0.0) {
    throw ParameterError("update_history: energies must be nonnegative");
  }
  return std::max(h_prev, psi_now);
}

}  // namespace pffrac

#include "pffrac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>

#include "pffrac/fem.hpp"
#include "pffrac/mesh.hpp"
#include "pffrac/stagger.hpp"

namespace pffrac {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

SymTensor2 random_strain(std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  return {dist(rng), dist(rng), dist(rng)};
}

/// Compressive complement of the driving energy: psi_plus + psi_minus equals
/// the full elastic energy for both trace signs.
double psi_minus(const SymTensor2& eps, const MaterialParams& m) {
  const SymTensor2 sigma = contract42(m.C, eps);
  const double p = (1.0 / 3.0) * contract22(identity2(), contract42(m.P_vol, sigma));
  const double p_neg = 0.5 * (p - std::abs(p));
  return p_neg * trace(eps);
}

VerifyResult check_projectors() {
  VerifyResult r{"projector identities", true, ""};
  const Projectors p = projectors();

  const SymTensor4 sum = p.vol + p.dev;
  const SymTensor4 id = identity4();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (sum(i, j) != id(i, j)) {
        r.pass = false;
        r.detail = "P_vol + P_dev != I4_sym";
        return r;
      }
    }
  }

  std::mt19937 rng(11);
  double worst = 0.0;
  for (int k = 0; k < 64; ++k) {
    const SymTensor2 e = random_strain(rng);
    const SymTensor2 dev = contract42(p.dev, e);
    worst = std::max(worst, std::abs(trace(dev) - trace(e) / 3.0));
    const SymTensor2 vol = contract42(p.vol, e);
    worst = std::max(worst, std::abs(vol.xx - trace(e) / 3.0));
    worst = std::max(worst, std::abs(vol.xy));
  }

  const SymTensor4 pvol2 = compose44(p.vol, p.vol);
  const SymTensor4 scaled = (2.0 / 3.0) * p.vol;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      worst = std::max(worst, std::abs(pvol2(i, j) - scaled(i, j)));
    }
  }

  r.pass = worst <= 1e-15;
  r.detail = "max deviation " + fmt(worst);
  return r;
}

VerifyResult check_elasticity_tensor() {
  VerifyResult r{"elasticity tensor", true, ""};
  const SymTensor4 c = make_elasticity_tensor(20.8, 0.3, PlanarMode::plane_strain);
  double worst = std::abs(c(0, 0) - 28.0);
  worst = std::max(worst, std::abs(c(0, 1) - 12.0));
  worst = std::max(worst, std::abs(c(1, 1) - 28.0));
  worst = std::max(worst, std::abs(c(2, 2) - 8.0));
  worst = std::max(worst, std::abs(c(0, 2)));
  worst = std::max(worst, std::abs(c(1, 2)));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(c(i, j) - c(j, i)));
  }
  r.pass = worst <= 1e-12;
  r.detail = "max deviation " + fmt(worst);
  return r;
}

VerifyResult check_energy_split() {
  VerifyResult r{"energy split completeness", true, ""};
  const MaterialParams m =
      MaterialParams::make(20.8, 0.3, 5e-4, 0.03, 0.0, PlanarMode::plane_strain);
  std::mt19937 rng(23);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const SymTensor2 e = random_strain(rng);
    const double total = 0.5 * contract22(e, contract42(m.C, e));
    const double split = psi_plus(e, m) + psi_minus(e, m);
    if (total > 0.0) worst = std::max(worst, std::abs(split - total) / total);
  }
  r.pass = worst <= 1e-12;
  r.detail = "max relative deviation " + fmt(worst);
  return r;
}

VerifyResult check_residual_stiffness_sign() {
  VerifyResult r{"residual stiffness sign", true, ""};
  MaterialParams m = MaterialParams::make(20.8, 0.3, 5e-4, 0.03, 1e-15, PlanarMode::plane_strain);
  const char* fault = std::getenv("PFFRAC_VERIFY_FAULT");
  if (fault && std::string(fault) == "eta_sign") m.eta = -m.eta;

  const SymTensor2 eps{1e-3, 0.0, 0.0};
  const SymTensor2 sigma = stress(eps, eps, 0.0, m);
  const double work = contract22(sigma, eps);
  r.pass = work > 0.0;
  r.detail = "sigma:eps at s = 0 is " + fmt(work);
  return r;
}

VerifyResult check_gradient_tension() {
  VerifyResult r{"stress gradient (tensile branch)", true, ""};
  const MaterialParams m =
      MaterialParams::make(20.8, 0.3, 5e-4, 0.03, 0.0, PlanarMode::plane_strain);
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> sdist(0.0, 1.0);

  auto energy = [&m](const SymTensor2& e, double s) {
    return s * s * psi_plus(e, m) + psi_minus(e, m);
  };

  double worst = 0.0;
  int accepted = 0;
  while (accepted < 50) {
    SymTensor2 e = random_strain(rng);
    if (trace(e) < 0.0) e = -e;
    if (!(trace(e) > 0.1 * norm(e))) continue;
    ++accepted;
    const double s = sdist(rng);
    const SymTensor2 sigma = stress(e, e, s, m);
    const double h = 1e-6;
    const double scale = std::max(1.0, norm(sigma));

    SymTensor2 ep = e, em = e;
    ep.xx += h;
    em.xx -= h;
    worst = std::max(worst,
                     std::abs((energy(ep, s) - energy(em, s)) / (2 * h) - sigma.xx) / scale);
    ep = e;
    em = e;
    ep.yy += h;
    em.yy -= h;
    worst = std::max(worst,
                     std::abs((energy(ep, s) - energy(em, s)) / (2 * h) - sigma.yy) / scale);
    ep = e;
    em = e;
    ep.xy += h;
    em.xy -= h;
    // The stored xy slot stands for both off-diagonal components.
    worst = std::max(
        worst, std::abs((energy(ep, s) - energy(em, s)) / (2 * h) - 2.0 * sigma.xy) / scale);
  }
  r.pass = worst <= 1e-6;
  r.detail = "max relative deviation " + fmt(worst);
  return r;
}

VerifyResult check_stress_tangent_consistency() {
  VerifyResult r{"stress/tangent contraction identity", true, ""};
  const MaterialParams m =
      MaterialParams::make(20.8, 0.3, 5e-4, 0.03, 1e-15, PlanarMode::plane_strain);
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> sdist(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const SymTensor2 e = random_strain(rng);
    const SymTensor2 x = random_strain(rng);
    const double s = sdist(rng);
    const SymTensor2 via_tangent = contract42(tangent_cmod(e, s, m), x);
    const SymTensor2 via_stress = stress(x, e, s, m);
    const double scale = std::max(1.0, norm(via_stress));
    worst = std::max(worst, norm(via_tangent - via_stress) / scale);
  }
  r.pass = worst <= 1e-14;
  r.detail = "max relative deviation " + fmt(worst);
  return r;
}

VerifyResult check_homogeneous_phase_field() {
  VerifyResult r{"homogeneous phase-field closed form", true, ""};
  const MaterialParams m =
      MaterialParams::make(20.8, 0.3, 5e-4, 0.03, 1e-15, PlanarMode::plane_strain);
  const Mesh mesh = structured_unit_square(8);

  FieldState state = FieldState::initial(mesh);
  double worst = 0.0;

  // H = 0: the undamaged field is a fixed point.
  std::vector<double> s = step_phase_field(state, mesh, m);
  for (double v : s) worst = std::max(worst, std::abs(v - 1.0));

  // H = Gc/(2 ls): s* = (Gc/ls) / (2H + Gc/ls) = 0.5 uniformly.
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    for (int q = 0; q < 3; ++q) state.h.at(e, q) = m.Gc / (2.0 * m.ls);
  }
  s = step_phase_field(state, mesh, m);
  for (double v : s) worst = std::max(worst, std::abs(v - 0.5));

  r.pass = worst <= 1e-10;
  r.detail = "max nodal deviation " + fmt(worst);
  return r;
}

VerifyResult check_patch_test() {
  VerifyResult r{"elastic patch test", true, ""};
  const MaterialParams m =
      MaterialParams::make(20.8, 0.3, 5e-4, 0.03, 0.0, PlanarMode::plane_strain);
  const Mesh mesh = structured_unit_square(8);
  const int n = mesh.node_count();

  const double a = 0.4, b = -0.3, c = 0.7, d = -0.1, e = 0.2, f = 0.5;
  auto exact_x = [=](double x, double y) { return a + b * x + c * y; };
  auto exact_y = [=](double x, double y) { return d + e * x + f * y; };

  std::set<int> boundary;
  for (const auto& edge : mesh.boundary_edges) {
    boundary.insert(edge.nodes[0]);
    boundary.insert(edge.nodes[1]);
  }

  std::vector<double> u_prev(static_cast<std::size_t>(2 * n), 0.0);
  std::vector<double> s_field(static_cast<std::size_t>(n), 1.0);
  AssembledSystem sys = assemble_displacement(mesh, u_prev, s_field, m);

  DirichletSet bc;
  for (int node : boundary) {
    const auto& p = mesh.nodes[static_cast<std::size_t>(node)];
    bc.add(DofMap::vector(node, 0), exact_x(p[0], p[1]));
    bc.add(DofMap::vector(node, 1), exact_y(p[0], p[1]));
  }
  bc.finalize();
  apply_dirichlet(sys, bc);

  CgOptions opts;
  opts.rel_tol = 1e-13;
  const std::vector<double> u = cg_solve(sys.matrix, sys.rhs, opts);

  double err = 0.0;
  for (int node = 0; node < n; ++node) {
    const auto& p = mesh.nodes[static_cast<std::size_t>(node)];
    err = std::max(err, std::abs(u[static_cast<std::size_t>(2 * node)] - exact_x(p[0], p[1])));
    err = std::max(err,
                   std::abs(u[static_cast<std::size_t>(2 * node + 1)] - exact_y(p[0], p[1])));
  }

  std::vector<SymTensor2> sigmas;
  for (int el = 0; el < mesh.triangle_count(); ++el) {
    const ElementGeometry geom = element_gradients(mesh, el);
    const SymTensor2 eps = element_strain(mesh, geom, u, el);
    sigmas.push_back(stress(eps, eps, 1.0, m));
  }
  SymTensor2 mean;
  for (const auto& sig : sigmas) mean = mean + sig;
  mean = (1.0 / static_cast<double>(sigmas.size())) * mean;
  double spread = 0.0;
  for (const auto& sig : sigmas) {
    spread = std::max({spread, std::abs(sig.xx - mean.xx), std::abs(sig.yy - mean.yy),
                       std::abs(sig.xy - mean.xy)});
  }

  r.pass = err <= 1e-10 && spread <= 1e-10;
  r.detail = "nodal error " + fmt(err) + ", stress spread " + fmt(spread);
  return r;
}

VerifyResult check_history_update() {
  VerifyResult r{"history update semantics", true, ""};
  bool ok = update_history(2.0, 3.0) == 3.0 && update_history(2.0, 1.0) == 2.0 &&
            update_history(0.0, 0.0) == 0.0;
  ok = ok && update_history(update_history(1.0, 4.0), 4.0) == 4.0;
  bool threw = false;
  try {
    update_history(-1.0, 0.0);
  } catch (const ParameterError&) {
    threw = true;
  }
  r.pass = ok && threw;
  r.detail = r.pass ? "max semantics hold" : "unexpected result";
  return r;
}

}  // namespace

std::vector<VerifyResult> run_verification() {
  std::vector<VerifyResult> results;
  results.push_back(check_projectors());
  results.push_back(check_elasticity_tensor());
  results.push_back(check_energy_split());
  results.push_back(check_residual_stiffness_sign());
  results.push_back(check_gradient_tension());
  results.push_back(check_stress_tangent_consistency());
  results.push_back(check_homogeneous_phase_field());
  results.push_back(check_patch_test());
  results.push_back(check_history_update());
  return results;
}

}  // namespace pffrac

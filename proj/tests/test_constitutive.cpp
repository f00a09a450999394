#include <doctest.h>

#include <random>

#include "pffrac/constitutive.hpp"
#include "support/oracles.hpp"

using namespace pffrac;
using namespace pffrac::testsupport;

namespace {

MaterialParams beam_material(double eta) {
  return MaterialParams::make(20.8, 0.3, 5e-4, 0.03, eta, PlanarMode::plane_strain);
}

}  // namespace

TEST_SUITE("constitutive") {

TEST_CASE("material parameter validation") {
  CHECK_THROWS_AS(MaterialParams::make(20.8, 0.3, 0.0, 0.03, 0.0, PlanarMode::plane_strain),
                  ParameterError);
  CHECK_THROWS_AS(MaterialParams::make(20.8, 0.3, 5e-4, -1.0, 0.0, PlanarMode::plane_strain),
                  ParameterError);
  CHECK_THROWS_AS(MaterialParams::make(20.8, 0.3, 5e-4, 0.03, -1e-15, PlanarMode::plane_strain),
                  ParameterError);
  const MaterialParams m = beam_material(1e-15);
  CHECK(m.C(0, 0) == doctest::Approx(28.0));
}

TEST_CASE("psi_plus frozen values") {
  const MaterialParams m = beam_material(0.0);
  SUBCASE("zero strain") { CHECK(psi_plus({0, 0, 0}, m) == 0.0); }
  SUBCASE("pure shear") {
    CHECK(psi_plus({0, 0, 0.5}, m) == doctest::Approx(4.0).epsilon(1e-13));
  }
  SUBCASE("equibiaxial compression keeps a deviatoric residue") {
    const SymTensor2 eps{-1e-3, -1e-3, 0.0};
    CHECK(psi_plus(eps, m) == doctest::Approx(4.444444444444444e-6).epsilon(1e-12));
  }
  SUBCASE("agrees with the brute-force transcription") {
    std::mt19937 rng(61);
    for (int k = 0; k < 200; ++k) {
      const SymTensor2 e = random_strain(rng);
      CHECK(psi_plus(e, m) == doctest::Approx(psi_plus_bruteforce(e, m)).epsilon(1e-13));
    }
  }
}

TEST_CASE("stress frozen values") {
  SUBCASE("s=1, eta=0 returns the elastic stress in both branches") {
    const MaterialParams m = beam_material(0.0);
    std::mt19937 rng(67);
    for (int k = 0; k < 100; ++k) {
      const SymTensor2 e = random_strain(rng);
      const SymTensor2 expect = contract42(m.C, e);
      const SymTensor2 got = stress(e, e, 1.0, m);
      CHECK(norm(got - expect) <= 1e-13 * (1.0 + norm(expect)));
    }
  }
  SUBCASE("fully damaged tensile response scales with eta") {
    const MaterialParams m = beam_material(1e-15);
    const SymTensor2 eps{1e-3, 0.0, 0.0};
    const SymTensor2 sigma = stress(eps, eps, 0.0, m);
    CHECK(sigma.xx == doctest::Approx(1e-15 * 0.028).epsilon(1e-12));
    CHECK(sigma.yy == doctest::Approx(1e-15 * 0.012).epsilon(1e-12));
    CHECK(sigma.xy == doctest::Approx(0.0));
  }
  SUBCASE("fully damaged compression keeps the volumetric stress") {
    const MaterialParams m = beam_material(0.0);
    const SymTensor2 eps{-1e-3, -1e-3, 0.0};
    const SymTensor2 sigma = stress(eps, eps, 0.0, m);
    CHECK(sigma.xx == doctest::Approx(-0.08 / 3.0).epsilon(1e-13));
    CHECK(sigma.yy == doctest::Approx(-0.08 / 3.0).epsilon(1e-13));
    CHECK(sigma.xy == doctest::Approx(0.0));
  }
}

TEST_CASE("tangent matches stress by contraction") {
  const MaterialParams m = beam_material(1e-15);
  SUBCASE("s=1, eta=0 gives C exactly") {
    const MaterialParams m0 = beam_material(0.0);
    for (const SymTensor2& branch : {SymTensor2{1, 0, 0}, SymTensor2{-1, -1, 0}}) {
      const SymTensor4 cm = tangent_cmod(branch, 1.0, m0);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          CHECK(cm(i, j) == doctest::Approx(m0.C(i, j)).epsilon(1e-14));
        }
      }
    }
  }
  SUBCASE("s=0, eta=0 compressive branch leaves the volumetric stiffness") {
    const MaterialParams m0 = beam_material(0.0);
    const SymTensor4 cm = tangent_cmod({-1.0, -1.0, 0.0}, 0.0, m0);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(cm(i, j) == doctest::Approx(m0.C_vol(i, j)).epsilon(1e-14));
      }
    }
  }
  SUBCASE("contraction identity against stress()") {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> sdist(0.0, 1.0);
    for (int k = 0; k < 300; ++k) {
      const SymTensor2 branch = random_strain(rng);
      const SymTensor2 x = random_strain(rng);
      const double s = sdist(rng);
      const SymTensor2 via_tangent = contract42(tangent_cmod(branch, s, m), x);
      const SymTensor2 via_stress = stress(x, branch, s, m);
      CHECK(norm(via_tangent - via_stress) <= 1e-14 * std::max(1.0, norm(via_stress)));
    }
  }
}

TEST_CASE("energy split completeness") {
  const MaterialParams m = beam_material(0.0);
  std::mt19937 rng(73);
  int tension = 0, compression = 0;
  for (int k = 0; k < 1000; ++k) {
    const SymTensor2 e = random_strain(rng);
    (trace(e) >= 0.0 ? tension : compression) += 1;
    const double total = 0.5 * contract22(e, contract42(m.C, e));
    const double split = psi_plus(e, m) + psi_minus_oracle(e, m);
    CHECK(std::abs(split - total) <= 1e-12 * total);
  }
  CHECK(tension > 100);
  CHECK(compression > 100);
}

TEST_CASE("stress is the energy gradient on the tensile branch") {
  const MaterialParams m = beam_material(0.0);
  std::mt19937 rng(79);
  std::uniform_real_distribution<double> sdist(0.0, 1.0);
  int accepted = 0;
  while (accepted < 100) {
    SymTensor2 e = random_strain(rng);
    if (trace(e) < 0.0) e = -e;
    if (!(trace(e) > 0.1 * norm(e))) continue;
    ++accepted;
    const double s = sdist(rng);
    auto energy = [&](const SymTensor2& x) {
      return s * s * psi_plus(x, m) + psi_minus_oracle(x, m);
    };
    const SymTensor2 grad = fd_gradient(energy, e);
    const SymTensor2 sigma = stress(e, e, s, m);
    const double scale = std::max(1.0, norm(sigma));
    CHECK(std::abs(grad.xx - sigma.xx) / scale <= 1e-6);
    CHECK(std::abs(grad.yy - sigma.yy) / scale <= 1e-6);
    CHECK(std::abs(grad.xy - 2.0 * sigma.xy) / scale <= 1e-6);
  }
}

TEST_CASE("degradation monotonicity in s") {
  const MaterialParams m = beam_material(0.0);
  std::mt19937 rng(83);
  for (int k = 0; k < 50; ++k) {
    SymTensor2 e = random_strain(rng);
    if (trace(e) < 0.0) e = -e;
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
      const double s = i / 20.0;
      const double mag = norm(stress(e, e, s, m));
      CHECK(mag >= prev);
      prev = mag;
    }
  }
}

TEST_CASE("history update") {
  CHECK(update_history(2.0, 3.0) == 3.0);
  CHECK(update_history(2.0, 1.0) == 2.0);
  CHECK(update_history(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(update_history(-0.1, 0.0), ParameterError);
  CHECK_THROWS_AS(update_history(0.0, -0.1), ParameterError);

  SUBCASE("idempotent and order-insensitive") {
    std::mt19937 rng(89);
    std::uniform_real_distribution<double> dist(0.0, 5.0);
    for (int k = 0; k < 50; ++k) {
      const double a = dist(rng), b = dist(rng), c = dist(rng);
      const double once = update_history(update_history(update_history(0.0, a), b), c);
      const double again = update_history(once, once);
      CHECK(again == once);
      const double reordered = update_history(update_history(update_history(0.0, c), a), b);
      CHECK(reordered == once);
    }
  }
}

}  // TEST_SUITE

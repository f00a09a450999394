#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pffrac/fem.hpp"
#include "support/oracles.hpp"

using namespace pffrac;
using namespace pffrac::testsupport;

namespace {

MaterialParams beam_material(double eta) {
  return MaterialParams::make(20.8, 0.3, 5e-4, 0.03, eta, PlanarMode::plane_strain);
}

std::set<int> boundary_nodes(const Mesh& mesh) {
  std::set<int> nodes;
  for (const auto& e : mesh.boundary_edges) {
    nodes.insert(e.nodes[0]);
    nodes.insert(e.nodes[1]);
  }
  return nodes;
}

/// Equilibrated plane-strain bending field: sigma = (c*y, 0, 0), zero body
/// force, quadratic displacements.
struct BendingSolution {
  double E, nu, c;
  double ux(double x, double y) const { return (1.0 - nu * nu) * c * x * y / E; }
  double uy(double x, double y) const {
    return -(1.0 - nu * nu) * c * x * x / (2.0 * E) - nu * (1.0 + nu) * c * y * y / (2.0 * E);
  }
};

double solve_bending_l2_error(int n, const MaterialParams& m, const BendingSolution& sol) {
  const Mesh mesh = structured_unit_square(n);
  const int nn = mesh.node_count();
  std::vector<double> u_prev(static_cast<std::size_t>(2 * nn), 0.0);
  std::vector<double> s(static_cast<std::size_t>(nn), 1.0);

  AssembledSystem sys = assemble_displacement(mesh, u_prev, s, m);
  DirichletSet bc;
  for (int node : boundary_nodes(mesh)) {
    const auto& p = mesh.nodes[static_cast<std::size_t>(node)];
    bc.add(DofMap::vector(node, 0), sol.ux(p[0], p[1]));
    bc.add(DofMap::vector(node, 1), sol.uy(p[0], p[1]));
  }
  bc.finalize();
  apply_dirichlet(sys, bc);

  CgOptions opts;
  opts.rel_tol = 1e-12;
  const std::vector<double> u = cg_solve(sys.matrix, sys.rhs, opts);

  const QuadratureRule& rule = QuadratureRule::triangle3();
  double err2 = 0.0;
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const ElementGeometry geom = element_gradients(mesh, e);
    const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
    for (int q = 0; q < 3; ++q) {
      double xq = 0.0, yq = 0.0, uhx = 0.0, uhy = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double lam = rule.bary[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)];
        const auto& p = mesh.nodes[static_cast<std::size_t>(tri[i])];
        xq += lam * p[0];
        yq += lam * p[1];
        uhx += lam * u[static_cast<std::size_t>(DofMap::vector(tri[i], 0))];
        uhy += lam * u[static_cast<std::size_t>(DofMap::vector(tri[i], 1))];
      }
      const double dx = uhx - sol.ux(xq, yq);
      const double dy = uhy - sol.uy(xq, yq);
      err2 += rule.weights[static_cast<std::size_t>(q)] * 2.0 * geom.area * (dx * dx + dy * dy);
    }
  }
  return std::sqrt(err2);
}

}  // namespace

TEST_SUITE("fem") {

TEST_CASE("element gradients") {
  SUBCASE("unit right triangle") {
    Mesh mesh;
    mesh.nodes = {{0, 0}, {1, 0}, {0, 1}};
    mesh.triangles = {{0, 1, 2}};
    const ElementGeometry geom = element_gradients(mesh, 0);
    CHECK(geom.area == doctest::Approx(0.5));
    CHECK(geom.grad[0][0] == doctest::Approx(-1.0));
    CHECK(geom.grad[0][1] == doctest::Approx(-1.0));
    CHECK(geom.grad[1][0] == doctest::Approx(1.0));
    CHECK(geom.grad[1][1] == doctest::Approx(0.0));
    CHECK(geom.grad[2][0] == doctest::Approx(0.0));
    CHECK(geom.grad[2][1] == doctest::Approx(1.0));
  }
  SUBCASE("gradients sum to zero and ignore translations") {
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
      Mesh mesh;
      const double x0 = dist(rng), y0 = dist(rng);
      double x1 = dist(rng), y1 = dist(rng), x2 = dist(rng), y2 = dist(rng);
      const double double_area = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
      if (std::abs(double_area) < 1e-2) continue;
      if (double_area < 0.0) std::swap(x1, x2), std::swap(y1, y2);
      mesh.nodes = {{x0, y0}, {x1, y1}, {x2, y2}};
      mesh.triangles = {{0, 1, 2}};
      const ElementGeometry geom = element_gradients(mesh, 0);
      CHECK(geom.grad[0][0] + geom.grad[1][0] + geom.grad[2][0] ==
            doctest::Approx(0.0).epsilon(1e-12));
      CHECK(geom.grad[0][1] + geom.grad[1][1] + geom.grad[2][1] ==
            doctest::Approx(0.0).epsilon(1e-12));

      Mesh shifted = mesh;
      for (auto& p : shifted.nodes) {
        p[0] += 3.25;
        p[1] -= 1.5;
      }
      const ElementGeometry geom2 = element_gradients(shifted, 0);
      for (int i = 0; i < 3; ++i) {
        CHECK(geom.grad[i][0] == doctest::Approx(geom2.grad[i][0]).epsilon(1e-12));
        CHECK(geom.grad[i][1] == doctest::Approx(geom2.grad[i][1]).epsilon(1e-12));
      }
    }
  }
  SUBCASE("degenerate element throws") {
    Mesh mesh;
    mesh.nodes = {{0, 0}, {1, 0}, {2, 0}};
    mesh.triangles = {{0, 1, 2}};
    CHECK_THROWS_AS(element_gradients(mesh, 0), GeometryError);
  }
}

TEST_CASE("quadrature integrates degree-2 monomials exactly") {
  // Reference triangle (0,0), (1,0), (0,1): x = lambda_1, y = lambda_2.
  Mesh mesh;
  mesh.nodes = {{0, 0}, {1, 0}, {0, 1}};
  mesh.triangles = {{0, 1, 2}};
  const ElementGeometry geom = element_gradients(mesh, 0);
  const QuadratureRule& rule = QuadratureRule::triangle3();

  double w_total = 0.0;
  for (double w : rule.weights) w_total += w;
  CHECK(w_total == doctest::Approx(0.5).epsilon(1e-15));

  auto integrate = [&](auto&& f) {
    double sum = 0.0;
    for (int q = 0; q < 3; ++q) {
      const double x = rule.bary[static_cast<std::size_t>(q)][1];
      const double y = rule.bary[static_cast<std::size_t>(q)][2];
      sum += rule.weights[static_cast<std::size_t>(q)] * 2.0 * geom.area * f(x, y);
    }
    return sum;
  };

  CHECK(integrate([](double x, double) { return x * x; }) ==
        doctest::Approx(barycentric_integral(0, 2, 0, 0.5)).epsilon(1e-14));
  CHECK(integrate([](double x, double y) { return x * y; }) ==
        doctest::Approx(barycentric_integral(0, 1, 1, 0.5)).epsilon(1e-14));
  CHECK(integrate([](double, double y) { return y * y; }) ==
        doctest::Approx(barycentric_integral(0, 0, 2, 0.5)).epsilon(1e-14));
  CHECK(barycentric_integral(0, 2, 0, 0.5) == doctest::Approx(1.0 / 12.0));
  CHECK(barycentric_integral(0, 1, 1, 0.5) == doctest::Approx(1.0 / 24.0));
}

TEST_CASE("phase-field assembly") {
  const MaterialParams m = beam_material(1e-15);
  const Mesh mesh = structured_unit_square(6);
  QuadHistory h(mesh.triangle_count());

  SUBCASE("history size mismatch is rejected") {
    QuadHistory wrong(3);
    CHECK_THROWS_AS(assemble_phase_field(mesh, wrong, m), ParameterError);
  }

  SUBCASE("H = 0: the solution is identically one") {
    const AssembledSystem sys = assemble_phase_field(mesh, h, m);
    CgOptions opts;
    opts.rel_tol = 1e-13;
    const std::vector<double> s = cg_solve(sys.matrix, sys.rhs, opts);
    for (double v : s) CHECK(std::abs(v - 1.0) <= 1e-10);
  }

  SUBCASE("uniform H hits the closed-form plateau") {
    for (int e = 0; e < mesh.triangle_count(); ++e) {
      for (int q = 0; q < 3; ++q) h.at(e, q) = m.Gc / (2.0 * m.ls);
    }
    const AssembledSystem sys = assemble_phase_field(mesh, h, m);
    CgOptions opts;
    opts.rel_tol = 1e-13;
    const std::vector<double> s = cg_solve(sys.matrix, sys.rhs, opts);
    for (double v : s) CHECK(std::abs(v - 0.5) <= 1e-10);
  }

  SUBCASE("matrix is symmetric with positive diagonal and positive definite") {
    for (int e = 0; e < mesh.triangle_count(); ++e) {
      for (int q = 0; q < 3; ++q) h.at(e, q) = (e + q) % 3 == 0 ? 2.5 : 0.0;
    }
    const AssembledSystem sys = assemble_phase_field(mesh, h, m);
    const SparseMatrix& a = sys.matrix;

    for (int i = 0; i < a.n; ++i) {
      for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
        const int j = a.col_indices[k];
        double mirrored = 0.0;
        for (int k2 = a.row_offsets[j]; k2 < a.row_offsets[j + 1]; ++k2) {
          if (a.col_indices[k2] == i) mirrored = a.values[k2];
        }
        CHECK(a.values[k] == doctest::Approx(mirrored).epsilon(1e-12));
        if (i == j) CHECK(a.values[k] > 0.0);
      }
    }

    std::mt19937 rng(101);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(static_cast<std::size_t>(a.n)), ax(static_cast<std::size_t>(a.n));
    for (int round = 0; round < 100; ++round) {
      for (double& v : x) v = dist(rng);
      a.multiply_serial(x, ax);
      CHECK(dot_serial(x, ax) > 0.0);
    }
  }
}

TEST_CASE("displacement assembly") {
  const Mesh mesh = structured_unit_square(5);
  const int nn = mesh.node_count();
  std::vector<double> s_one(static_cast<std::size_t>(nn), 1.0);
  std::vector<double> s_zero(static_cast<std::size_t>(nn), 0.0);
  std::vector<double> u_tensile(static_cast<std::size_t>(2 * nn), 0.0);
  for (int node = 0; node < nn; ++node) {
    u_tensile[static_cast<std::size_t>(2 * node)] =
        1e-3 * mesh.nodes[static_cast<std::size_t>(node)][0];
  }

  SUBCASE("field size mismatch is rejected") {
    const MaterialParams m = beam_material(0.0);
    std::vector<double> bad(static_cast<std::size_t>(nn), 0.0);
    CHECK_THROWS_AS(assemble_displacement(mesh, bad, s_one, m), ParameterError);
    CHECK_THROWS_AS(assemble_displacement(mesh, u_tensile, std::vector<double>(3, 1.0), m),
                    ParameterError);
  }

  SUBCASE("fully damaged matrix is the eta-scaled intact matrix") {
    const MaterialParams m_eta = beam_material(1e-15);
    const MaterialParams m_0 = beam_material(0.0);
    const AssembledSystem damaged = assemble_displacement(mesh, u_tensile, s_zero, m_eta);
    const AssembledSystem intact = assemble_displacement(mesh, u_tensile, s_one, m_0);
    REQUIRE(damaged.matrix.nnz() == intact.matrix.nnz());
    for (std::size_t k = 0; k < intact.matrix.values.size(); ++k) {
      CHECK(damaged.matrix.values[k] ==
            doctest::Approx(1e-15 * intact.matrix.values[k]).epsilon(1e-12));
    }
  }

  SUBCASE("matrix is symmetric") {
    const MaterialParams m = beam_material(1e-15);
    std::vector<double> s_mixed(static_cast<std::size_t>(nn));
    for (int i = 0; i < nn; ++i) {
      s_mixed[static_cast<std::size_t>(i)] = 0.3 + 0.7 * (i % 5) / 4.0;
    }
    const AssembledSystem sys = assemble_displacement(mesh, u_tensile, s_mixed, m);
    const SparseMatrix& a = sys.matrix;
    for (int i = 0; i < a.n; ++i) {
      for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
        const int j = a.col_indices[k];
        double mirrored = 0.0;
        for (int k2 = a.row_offsets[j]; k2 < a.row_offsets[j + 1]; ++k2) {
          if (a.col_indices[k2] == i) mirrored = a.values[k2];
        }
        CHECK(a.values[k] == doctest::Approx(mirrored).epsilon(1e-12));
      }
    }
    for (double v : sys.rhs) CHECK(v == 0.0);
  }
}

TEST_CASE("assembly is deterministic across thread counts") {
#ifdef _OPENMP
  const Mesh mesh = structured_unit_square(12);
  const MaterialParams m = beam_material(1e-15);
  const int nn = mesh.node_count();
  std::vector<double> s(static_cast<std::size_t>(nn));
  std::vector<double> u(static_cast<std::size_t>(2 * nn));
  std::mt19937 rng(103);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (double& v : s) v = dist(rng);
  for (double& v : u) v = 1e-3 * dist(rng);
  QuadHistory h(mesh.triangle_count());
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    for (int q = 0; q < 3; ++q) h.at(e, q) = dist(rng);
  }

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const AssembledSystem disp1 = assemble_displacement(mesh, u, s, m);
  const AssembledSystem pf1 = assemble_phase_field(mesh, h, m);
  omp_set_num_threads(4);
  const AssembledSystem disp4 = assemble_displacement(mesh, u, s, m);
  const AssembledSystem pf4 = assemble_phase_field(mesh, h, m);
  omp_set_num_threads(saved);

  CHECK(disp1.matrix.values == disp4.matrix.values);
  CHECK(disp1.matrix.col_indices == disp4.matrix.col_indices);
  CHECK(pf1.matrix.values == pf4.matrix.values);
  CHECK(pf1.rhs == pf4.rhs);

  const AssembledSystem disp_serial = assemble_displacement(mesh, u, s, m, false);
  CHECK(disp1.matrix.values == disp_serial.matrix.values);
#endif
}

TEST_CASE("apply_dirichlet") {
  SUBCASE("1x1 frozen example") {
    TripletBuffer buf;
    buf.add(0, 0, 2.0);
    AssembledSystem sys{to_csr(buf, 1), {0.0}};
    DirichletSet bc;
    bc.add(0, 5.0);
    bc.finalize();
    apply_dirichlet(sys, bc);
    const std::vector<double> x = cg_solve(sys.matrix, sys.rhs);
    CHECK(x[0] == doctest::Approx(5.0));
  }
  SUBCASE("2x2 hand elimination") {
    TripletBuffer buf;
    buf.add(0, 0, 2.0);
    buf.add(0, 1, 1.0);
    buf.add(1, 0, 1.0);
    buf.add(1, 1, 2.0);
    AssembledSystem sys{to_csr(buf, 2), {0.0, 0.0}};
    DirichletSet bc;
    bc.add(0, 1.0);
    bc.finalize();
    apply_dirichlet(sys, bc);
    const std::vector<double> x = cg_solve(sys.matrix, sys.rhs);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(-0.5).epsilon(1e-12));
  }
  SUBCASE("constraining every dof reproduces the prescribed vector") {
    const Mesh mesh = structured_unit_square(3);
    const MaterialParams m = beam_material(0.0);
    const int nn = mesh.node_count();
    std::vector<double> u0(static_cast<std::size_t>(2 * nn), 0.0);
    std::vector<double> s(static_cast<std::size_t>(nn), 1.0);
    AssembledSystem sys = assemble_displacement(mesh, u0, s, m);
    DirichletSet bc;
    std::mt19937 rng(107);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> prescribed(static_cast<std::size_t>(2 * nn));
    for (int d = 0; d < 2 * nn; ++d) {
      prescribed[static_cast<std::size_t>(d)] = dist(rng);
      bc.add(d, prescribed[static_cast<std::size_t>(d)]);
    }
    bc.finalize();
    apply_dirichlet(sys, bc);
    const std::vector<double> x = cg_solve(sys.matrix, sys.rhs);
    for (int d = 0; d < 2 * nn; ++d) {
      CHECK(x[static_cast<std::size_t>(d)] ==
            doctest::Approx(prescribed[static_cast<std::size_t>(d)]).epsilon(1e-12));
    }
  }
  SUBCASE("conflicting duplicate values are rejected") {
    DirichletSet bc;
    bc.add(3, 1.0);
    bc.add(3, 2.0);
    CHECK_THROWS_AS(bc.finalize(), ConstraintError);
    DirichletSet ok;
    ok.add(3, 1.0);
    ok.add(3, 1.0);
    ok.finalize();
    CHECK(ok.entries().size() == 1);
  }
}

TEST_CASE("patch test: affine fields are reproduced exactly") {
  const MaterialParams m = beam_material(0.0);
  const Mesh mesh = structured_unit_square(8);
  const int nn = mesh.node_count();

  std::mt19937 rng(109);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double a = dist(rng), b = dist(rng), c = dist(rng);
  const double d = dist(rng), e = dist(rng), f = dist(rng);
  auto ux = [&](double x, double y) { return a + b * x + c * y; };
  auto uy = [&](double x, double y) { return d + e * x + f * y; };

  std::vector<double> u_prev(static_cast<std::size_t>(2 * nn), 0.0);
  std::vector<double> s(static_cast<std::size_t>(nn), 1.0);
  AssembledSystem sys = assemble_displacement(mesh, u_prev, s, m);
  DirichletSet bc;
  for (int node : boundary_nodes(mesh)) {
    const auto& p = mesh.nodes[static_cast<std::size_t>(node)];
    bc.add(DofMap::vector(node, 0), ux(p[0], p[1]));
    bc.add(DofMap::vector(node, 1), uy(p[0], p[1]));
  }
  bc.finalize();
  apply_dirichlet(sys, bc);
  CgOptions opts;
  opts.rel_tol = 1e-13;
  const std::vector<double> u = cg_solve(sys.matrix, sys.rhs, opts);

  for (int node = 0; node < nn; ++node) {
    const auto& p = mesh.nodes[static_cast<std::size_t>(node)];
    CHECK(std::abs(u[static_cast<std::size_t>(2 * node)] - ux(p[0], p[1])) <= 1e-10);
    CHECK(std::abs(u[static_cast<std::size_t>(2 * node + 1)] - uy(p[0], p[1])) <= 1e-10);
  }

  SymTensor2 first;
  for (int el = 0; el < mesh.triangle_count(); ++el) {
    const ElementGeometry geom = element_gradients(mesh, el);
    const SymTensor2 eps = element_strain(mesh, geom, u, el);
    const SymTensor2 sig = stress(eps, eps, 1.0, m);
    if (el == 0) {
      first = sig;
    } else {
      CHECK(std::abs(sig.xx - first.xx) <= 1e-10);
      CHECK(std::abs(sig.yy - first.yy) <= 1e-10);
      CHECK(std::abs(sig.xy - first.xy) <= 1e-10);
    }
  }
}

TEST_CASE("displacement solve converges at second order") {
  const MaterialParams m = beam_material(0.0);
  const BendingSolution sol{m.E, m.nu, 1.0};
  const double e8 = solve_bending_l2_error(8, m, sol);
  const double e16 = solve_bending_l2_error(16, m, sol);
  const double e32 = solve_bending_l2_error(32, m, sol);
  const double r1 = e8 / e16;
  const double r2 = e16 / e32;
  CHECK(r1 >= 3.5);
  CHECK(r1 <= 4.5);
  CHECK(r2 >= 3.5);
  CHECK(r2 <= 4.5);
}

TEST_CASE("reaction force") {
  const MaterialParams m = beam_material(0.0);
  const Mesh mesh = structured_unit_square(4);
  const int nn = mesh.node_count();
  std::vector<double> s(static_cast<std::size_t>(nn), 1.0);

  SUBCASE("zero displacement gives zero reaction") {
    std::vector<double> u(static_cast<std::size_t>(2 * nn), 0.0);
    const Reaction r = reaction_force(mesh, "top", u, s, m);
    CHECK(r.fx == 0.0);
    CHECK(r.fy == 0.0);
  }

  SUBCASE("uniform uniaxial stress integrates to sigma0 * length") {
    const double sigma0 = 3.7;
    // Strain for sigma = (0, sigma0, 0) from the plane-strain compliance.
    const double exx = (-m.nu * (1.0 + m.nu) * sigma0) / m.E;
    const double eyy = ((1.0 - m.nu * m.nu) * sigma0) / m.E;
    std::vector<double> u(static_cast<std::size_t>(2 * nn));
    for (int node = 0; node < nn; ++node) {
      const auto& p = mesh.nodes[static_cast<std::size_t>(node)];
      u[static_cast<std::size_t>(2 * node)] = exx * p[0];
      u[static_cast<std::size_t>(2 * node + 1)] = eyy * p[1];
    }
    const Reaction top = reaction_force(mesh, "top", u, s, m);
    CHECK(top.fx == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(top.fy == doctest::Approx(sigma0).epsilon(1e-12));
    const Reaction bottom = reaction_force(mesh, "bottom", u, s, m);
    CHECK(bottom.fy == doctest::Approx(-sigma0).epsilon(1e-12));
  }

  SUBCASE("point tags have no edges") {
    std::vector<double> u(static_cast<std::size_t>(2 * nn), 0.0);
    CHECK_THROWS_AS(reaction_force(mesh, "origin", u, s, m), LookupError);
  }
}

TEST_CASE("quadrature-state projection") {
  const Mesh mesh = structured_unit_square(3);
  const QuadratureRule& rule = QuadratureRule::triangle3();

  SUBCASE("constant data projects to the constant") {
    QuadHistory h(mesh.triangle_count());
    for (int e = 0; e < mesh.triangle_count(); ++e) {
      for (int q = 0; q < 3; ++q) h.at(e, q) = 2.75;
    }
    const ElementLinearField field = project_quadstate(mesh, h);
    for (int e = 0; e < mesh.triangle_count(); ++e) {
      for (double v : field.vertex_values[static_cast<std::size_t>(e)]) {
        CHECK(v == doctest::Approx(2.75).epsilon(1e-13));
      }
    }
  }

  SUBCASE("global linear data is reproduced exactly anywhere") {
    auto linear = [](double x, double y) { return 0.3 + 1.7 * x - 0.9 * y; };
    QuadHistory h(mesh.triangle_count());
    for (int e = 0; e < mesh.triangle_count(); ++e) {
      const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
      for (int q = 0; q < 3; ++q) {
        double x = 0.0, y = 0.0;
        for (int i = 0; i < 3; ++i) {
          const double lam = rule.bary[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)];
          x += lam * mesh.nodes[static_cast<std::size_t>(tri[i])][0];
          y += lam * mesh.nodes[static_cast<std::size_t>(tri[i])][1];
        }
        h.at(e, q) = linear(x, y);
      }
    }
    const ElementLinearField field = project_quadstate(mesh, h);
    std::mt19937 rng(113);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int e = 0; e < mesh.triangle_count(); ++e) {
      const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
      double l0 = dist(rng), l1 = dist(rng) * (1.0 - l0);
      const std::array<double, 3> bary{l0, l1, 1.0 - l0 - l1};
      double x = 0.0, y = 0.0;
      for (int i = 0; i < 3; ++i) {
        x += bary[static_cast<std::size_t>(i)] * mesh.nodes[static_cast<std::size_t>(tri[i])][0];
        y += bary[static_cast<std::size_t>(i)] * mesh.nodes[static_cast<std::size_t>(tri[i])][1];
      }
      CHECK(field.evaluate(e, bary) == doctest::Approx(linear(x, y)).epsilon(1e-12));
    }
  }

  SUBCASE("round trip at the quadrature points") {
    QuadHistory h(mesh.triangle_count());
    std::mt19937 rng(127);
    std::uniform_real_distribution<double> dist(0.0, 10.0);
    for (int e = 0; e < mesh.triangle_count(); ++e) {
      for (int q = 0; q < 3; ++q) h.at(e, q) = dist(rng);
    }
    const ElementLinearField field = project_quadstate(mesh, h);
    double worst = 0.0;
    for (int e = 0; e < mesh.triangle_count(); ++e) {
      for (int q = 0; q < 3; ++q) {
        const double v = field.evaluate(e, rule.bary[static_cast<std::size_t>(q)]);
        worst = std::max(worst, std::abs(v - h.at(e, q)));
      }
    }
    CHECK(worst <= 1e-12);
  }
}

}  // TEST_SUITE

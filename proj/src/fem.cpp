#include "pffrac/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace pffrac {

const QuadratureRule& QuadratureRule::triangle3() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    const double a = 2.0 / 3.0;
    const double b = 1.0 / 6.0;
    r.bary = {{{a, b, b}, {b, a, b}, {b, b, a}}};
    r.weights = {b, b, b};
    return r;
  }();
  return rule;
}

void DirichletSet::finalize() {
  std::sort(entries_.begin(), entries_.end());
  std::vector<std::pair<int, double>> unique;
  unique.reserve(entries_.size());
  for (const auto& [dof, value] : entries_) {
    if (!unique.empty() && unique.back().first == dof) {
      if (unique.back().second != value) {
        throw ConstraintError("DirichletSet: dof " + std::to_string(dof) +
                              " prescribed twice with conflicting values " +
                              std::to_string(unique.back().second) + " and " +
                              std::to_string(value));
      }
      continue;
    }
    unique.push_back({dof, value});
  }
  entries_ = std::move(unique);
}

ElementGeometry element_gradients(const Mesh& mesh, int e) {
  const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
  const auto& a = mesh.nodes[static_cast<std::size_t>(tri[0])];
  const auto& b = mesh.nodes[static_cast<std::size_t>(tri[1])];
  const auto& c = mesh.nodes[static_cast<std::size_t>(tri[2])];

  const double two_a = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
  if (!(two_a > 0.0)) {
    throw GeometryError("element_gradients: degenerate element " + std::to_string(e) +
                        " (doubled area " + std::to_string(two_a) + ")");
  }

  ElementGeometry geom;
  geom.area = 0.5 * two_a;
  geom.grad[0] = {(b[1] - c[1]) / two_a, (c[0] - b[0]) / two_a};
  geom.grad[1] = {(c[1] - a[1]) / two_a, (a[0] - c[0]) / two_a};
  geom.grad[2] = {(a[1] - b[1]) / two_a, (b[0] - a[0]) / two_a};
  return geom;
}

SymTensor2 element_strain(const Mesh& mesh, const ElementGeometry& geom,
                          std::span<const double> u, int e) {
  const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
  SymTensor2 eps;
  for (int i = 0; i < 3; ++i) {
    const double ux = u[static_cast<std::size_t>(DofMap::vector(tri[i], 0))];
    const double uy = u[static_cast<std::size_t>(DofMap::vector(tri[i], 1))];
    eps.xx += geom.grad[i][0] * ux;
    eps.yy += geom.grad[i][1] * uy;
    eps.xy += 0.5 * (geom.grad[i][1] * ux + geom.grad[i][0] * uy);
  }
  return eps;
}

AssembledSystem assemble_phase_field(const Mesh& mesh, const QuadHistory& h,
                                     const MaterialParams& m, bool parallel) {
  const int ne = mesh.triangle_count();
  if (h.element_count() != ne) {
    throw ParameterError("assemble_phase_field: history sized for " +
                         std::to_string(h.element_count()) + " elements, mesh has " +
                         std::to_string(ne));
  }

  const int n = mesh.node_count();
  const QuadratureRule& rule = QuadratureRule::triangle3();

  TripletBuffer buf;
  buf.resize(static_cast<std::size_t>(ne) * 9);
  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  std::vector<double> rhs_local(static_cast<std::size_t>(ne) * 3, 0.0);

  auto element_kernel = [&](int e) {
    const ElementGeometry geom = element_gradients(mesh, e);
    const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];

    std::array<std::array<double, 3>, 3> ke{};
    std::array<double, 3> fe{};
    for (int q = 0; q < 3; ++q) {
      const double cq = rule.weights[static_cast<std::size_t>(q)] * 2.0 * geom.area;
      const double reaction = 2.0 * h.at(e, q) + m.Gc / m.ls;
      for (int i = 0; i < 3; ++i) {
        const double ni = rule.bary[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)];
        fe[static_cast<std::size_t>(i)] += cq * (m.Gc / m.ls) * ni;
        for (int j = 0; j < 3; ++j) {
          const double nj = rule.bary[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
          const double grad_term = m.Gc * m.ls *
                                   (geom.grad[i][0] * geom.grad[j][0] +
                                    geom.grad[i][1] * geom.grad[j][1]);
          ke[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
              cq * (grad_term + reaction * ni * nj);
        }
      }
    }

    const std::size_t base = static_cast<std::size_t>(e) * 9;
    for (int i = 0; i < 3; ++i) {
      rhs_local[static_cast<std::size_t>(e) * 3 + i] = fe[static_cast<std::size_t>(i)];
      for (int j = 0; j < 3; ++j) {
        buf[base + static_cast<std::size_t>(i * 3 + j)] = {
            DofMap::scalar(tri[i]), DofMap::scalar(tri[j]),
            ke[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]};
      }
    }
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int e = 0; e < ne; ++e) element_kernel(e);
  } else {
    for (int e = 0; e < ne; ++e) element_kernel(e);
  }

  // Serial scatter keeps the rhs accumulation order fixed.
  for (int e = 0; e < ne; ++e) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
    for (int i = 0; i < 3; ++i) {
      rhs[static_cast<std::size_t>(DofMap::scalar(tri[i]))] +=
          rhs_local[static_cast<std::size_t>(e) * 3 + i];
    }
  }

  AssembledSystem sys;
  sys.matrix = to_csr(buf, n);
  sys.rhs = std::move(rhs);
  return sys;
}

AssembledSystem assemble_displacement(const Mesh& mesh, std::span<const double> u_prev,
                                      std::span<const double> s, const MaterialParams& m,
                                      bool parallel) {
  const int ne = mesh.triangle_count();
  const int n = mesh.node_count();
  if (u_prev.size() != static_cast<std::size_t>(2 * n)) {
    throw ParameterError("assemble_displacement: u_prev has " +
                         std::to_string(u_prev.size()) + " entries, expected " +
                         std::to_string(2 * n));
  }
  if (s.size() != static_cast<std::size_t>(n)) {
    throw ParameterError("assemble_displacement: s has " + std::to_string(s.size()) +
                         " entries, expected " + std::to_string(n));
  }

  const QuadratureRule& rule = QuadratureRule::triangle3();

  TripletBuffer buf;
  buf.resize(static_cast<std::size_t>(ne) * 36);

  auto element_kernel = [&](int e) {
    const ElementGeometry geom = element_gradients(mesh, e);
    const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
    const SymTensor2 eps_branch = element_strain(mesh, geom, u_prev, e);

    // B maps the 6 nodal dofs to tensor strain components (xx, yy, xy).
    std::array<std::array<double, 6>, 3> b_mat{};
    for (int i = 0; i < 3; ++i) {
      b_mat[0][static_cast<std::size_t>(2 * i)] = geom.grad[i][0];
      b_mat[1][static_cast<std::size_t>(2 * i + 1)] = geom.grad[i][1];
      b_mat[2][static_cast<std::size_t>(2 * i)] = 0.5 * geom.grad[i][1];
      b_mat[2][static_cast<std::size_t>(2 * i + 1)] = 0.5 * geom.grad[i][0];
    }

    std::array<std::array<double, 6>, 6> ke{};
    for (int q = 0; q < 3; ++q) {
      const double cq = rule.weights[static_cast<std::size_t>(q)] * 2.0 * geom.area;
      double sq = 0.0;
      for (int i = 0; i < 3; ++i) {
        sq += rule.bary[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)] *
              s[static_cast<std::size_t>(tri[i])];
      }
      const SymTensor4 cmod = tangent_cmod(eps_branch, sq, m);

      // d = W cmod W with W = diag(1,1,2): the energy-consistent Voigt form.
      std::array<std::array<double, 3>, 3> d{};
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const double wa = a == 2 ? 2.0 : 1.0;
          const double wb = b == 2 ? 2.0 : 1.0;
          d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = wa * cmod(a, b) * wb;
        }
      }

      std::array<std::array<double, 6>, 3> db{};
      for (int a = 0; a < 3; ++a) {
        for (int col = 0; col < 6; ++col) {
          double sum = 0.0;
          for (int b = 0; b < 3; ++b) {
            sum += d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
                   b_mat[static_cast<std::size_t>(b)][static_cast<std::size_t>(col)];
          }
          db[static_cast<std::size_t>(a)][static_cast<std::size_t>(col)] = sum;
        }
      }
      for (int row = 0; row < 6; ++row) {
        for (int col = 0; col < 6; ++col) {
          double sum = 0.0;
          for (int a = 0; a < 3; ++a) {
            sum += b_mat[static_cast<std::size_t>(a)][static_cast<std::size_t>(row)] *
                   db[static_cast<std::size_t>(a)][static_cast<std::size_t>(col)];
          }
          ke[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] += cq * sum;
        }
      }
    }

    const std::size_t base = static_cast<std::size_t>(e) * 36;
    for (int i = 0; i < 6; ++i) {
      const int row = DofMap::vector(tri[i / 2], i % 2);
      for (int j = 0; j < 6; ++j) {
        const int col = DofMap::vector(tri[j / 2], j % 2);
        buf[base + static_cast<std::size_t>(i * 6 + j)] = {
            row, col, ke[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]};
      }
    }
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int e = 0; e < ne; ++e) element_kernel(e);
  } else {
    for (int e = 0; e < ne; ++e) element_kernel(e);
  }

  AssembledSystem sys;
  sys.matrix = to_csr(buf, 2 * n);
  sys.rhs.assign(static_cast<std::size_t>(2 * n), 0.0);
  return sys;
}

void apply_dirichlet(AssembledSystem& system, const DirichletSet& bc) {
  SparseMatrix& a = system.matrix;
  std::vector<double>& b = system.rhs;

  std::vector<char> constrained(static_cast<std::size_t>(a.n), 0);
  std::vector<double> value(static_cast<std::size_t>(a.n), 0.0);
  for (const auto& [dof, v] : bc.entries()) {
    if (dof < 0 || dof >= a.n) {
      throw ConstraintError("apply_dirichlet: dof " + std::to_string(dof) +
                            " out of range for n = " + std::to_string(a.n));
    }
    constrained[static_cast<std::size_t>(dof)] = 1;
    value[static_cast<std::size_t>(dof)] = v;
  }

  for (int i = 0; i < a.n; ++i) {
    const bool row_fixed = constrained[static_cast<std::size_t>(i)] != 0;
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const int j = a.col_indices[k];
      const bool col_fixed = constrained[static_cast<std::size_t>(j)] != 0;
      if (row_fixed && col_fixed) {
        a.values[k] = i == j ? 1.0 : 0.0;
      } else if (col_fixed) {
        b[static_cast<std::size_t>(i)] -= a.values[k] * value[static_cast<std::size_t>(j)];
        a.values[k] = 0.0;
      } else if (row_fixed) {
        a.values[k] = 0.0;
      }
    }
  }

  for (const auto& [dof, v] : bc.entries()) {
    bool has_diag = false;
    for (int k = a.row_offsets[dof]; k < a.row_offsets[dof + 1]; ++k) {
      if (a.col_indices[k] == dof) {
        has_diag = true;
        break;
      }
    }
    if (!has_diag) {
      throw ConstraintError("apply_dirichlet: dof " + std::to_string(dof) +
                            " has no structural diagonal entry");
    }
    b[static_cast<std::size_t>(dof)] = v;
  }
}

Reaction reaction_force(const Mesh& mesh, const std::string& tag, std::span<const double> u,
                        std::span<const double> s, const MaterialParams& m) {
  const TaggedEntities ents = entities_with_tag(mesh, tag);
  if (ents.edges.empty()) {
    throw LookupError("reaction_force: tag \"" + tag + "\" has no boundary edges");
  }

  // Edge -> adjacent triangles.
  std::map<std::pair<int, int>, std::vector<int>> adjacency;
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
    for (int k = 0; k < 3; ++k) {
      const int p = tri[k];
      const int q = tri[(k + 1) % 3];
      adjacency[{std::min(p, q), std::max(p, q)}].push_back(e);
    }
  }

  // 2-point Gauss on [0,1].
  const double g = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> xi = {0.5 - g, 0.5 + g};

  Reaction f;
  for (const BoundaryEdge& edge : ents.edges) {
    const auto key = std::make_pair(std::min(edge.nodes[0], edge.nodes[1]),
                                    std::max(edge.nodes[0], edge.nodes[1]));
    const auto it = adjacency.find(key);
    if (it == adjacency.end()) {
      throw IntegrityError("reaction_force: tagged edge (" + std::to_string(edge.nodes[0]) +
                           ", " + std::to_string(edge.nodes[1]) + ") is not a triangle edge");
    }
    if (it->second.size() != 1) {
      throw IntegrityError("reaction_force: tagged edge (" + std::to_string(edge.nodes[0]) +
                           ", " + std::to_string(edge.nodes[1]) +
                           ") is interior; outward normal is ambiguous");
    }
    const int e = it->second.front();

    const auto& pa = mesh.nodes[static_cast<std::size_t>(edge.nodes[0])];
    const auto& pb = mesh.nodes[static_cast<std::size_t>(edge.nodes[1])];
    const double tx = pb[0] - pa[0];
    const double ty = pb[1] - pa[1];
    const double len = std::hypot(tx, ty);

    double nx = ty / len;
    double ny = -tx / len;
    const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
    int opposite = tri[0];
    for (int v : tri) {
      if (v != edge.nodes[0] && v != edge.nodes[1]) opposite = v;
    }
    const auto& po = mesh.nodes[static_cast<std::size_t>(opposite)];
    const double mx = 0.5 * (pa[0] + pb[0]) - po[0];
    const double my = 0.5 * (pa[1] + pb[1]) - po[1];
    if (nx * mx + ny * my < 0.0) {
      nx = -nx;
      ny = -ny;
    }

    const ElementGeometry geom = element_gradients(mesh, e);
    const SymTensor2 eps = element_strain(mesh, geom, u, e);
    const double sa = s[static_cast<std::size_t>(edge.nodes[0])];
    const double sb = s[static_cast<std::size_t>(edge.nodes[1])];

    for (double x : xi) {
      const double sq = sa * (1.0 - x) + sb * x;
      const SymTensor2 sig = stress(eps, eps, sq, m);
      const double w = 0.5 * len;
      f.fx += w * (sig.xx * nx + sig.xy * ny);
      f.fy += w * (sig.xy * nx + sig.yy * ny);
    }
  }
  return f;
}

ElementLinearField project_quadstate(const Mesh& mesh, const QuadHistory& q) {
  const QuadratureRule& rule = QuadratureRule::triangle3();

  // Reference mass matrix and load from the same rule; the physical 2A
  // factor cancels between the two sides.
  std::array<std::array<double, 3>, 3> mass{};
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        mass[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
            rule.weights[static_cast<std::size_t>(k)] *
            rule.bary[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
            rule.bary[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      }
    }
  }

  auto solve3 = [](const std::array<std::array<double, 3>, 3>& a,
                   const std::array<double, 3>& b) {
    const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                       a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                       a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    std::array<double, 3> x{};
    for (int c = 0; c < 3; ++c) {
      std::array<std::array<double, 3>, 3> m = a;
      for (int r = 0; r < 3; ++r) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = b[static_cast<std::size_t>(r)];
      const double detc = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                          m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                          m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
      x[static_cast<std::size_t>(c)] = detc / det;
    }
    return x;
  };

  ElementLinearField field;
  field.vertex_values.resize(static_cast<std::size_t>(mesh.triangle_count()));
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    std::array<double, 3> load{};
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < 3; ++i) {
        load[static_cast<std::size_t>(i)] +=
            rule.weights[static_cast<std::size_t>(k)] *
            rule.bary[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * q.at(e, k);
      }
    }
    field.vertex_values[static_cast<std::size_t>(e)] = solve3(mass, load);
  }
  return field;
}

}  // namespace pffrac

/** @file fem.hpp
 *  @brief P1 triangular finite elements for the coupled problem: quadrature,
 *         shape-function gradients, weak-form assembly, Dirichlet
 *         elimination, boundary reactions and quadrature-state projection.
 *
 *  Element loops run under OpenMP; contributions are written into
 *  pre-sized triplet slots and merged through the deterministic CSR path,
 *  so assembled values are bit-identical for any thread count.
 */
#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "pffrac/constitutive.hpp"
#include "pffrac/linalg.hpp"
#include "pffrac/mesh.hpp"

namespace pffrac {

/// Three interior points, exact for degree-2 polynomials; weights sum to
/// the reference-triangle area 1/2.
struct QuadratureRule {
  std::array<std::array<double, 3>, 3> bary;
  std::array<double, 3> weights;

  static const QuadratureRule& triangle3();
};

/// Scalar fields use one dof per node; vector fields interleave as
/// node i -> dofs (2i, 2i+1).
struct DofMap {
  static int scalar(int node) { return node; }
  static int vector(int node, int axis) { return 2 * node + axis; }
};

/// Prescribed dof values; finalize() sorts, dedupes and rejects conflicts.
class DirichletSet {
 public:
  void add(int dof, double value) { entries_.push_back({dof, value}); }
  void finalize();

  const std::vector<std::pair<int, double>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<std::pair<int, double>> entries_;
};

/// Per-element, per-quadrature-point history values H >= 0.
class QuadHistory {
 public:
  QuadHistory() = default;
  explicit QuadHistory(int n_elements)
      : n_elements_(n_elements), data_(static_cast<std::size_t>(n_elements) * 3, 0.0) {}

  int element_count() const { return n_elements_; }
  double at(int e, int q) const { return data_[static_cast<std::size_t>(e) * 3 + q]; }
  double& at(int e, int q) { return data_[static_cast<std::size_t>(e) * 3 + q]; }
  const std::vector<double>& data() const { return data_; }

 private:
  int n_elements_ = 0;
  std::vector<double> data_;
};

struct ElementGeometry {
  std::array<std::array<double, 2>, 3> grad;  // constant shape gradients
  double area = 0.0;
};

/// Shape-function gradients and area; throws on degenerate elements.
ElementGeometry element_gradients(const Mesh& mesh, int e);

/// Constant P1 strain of an interleaved nodal vector field on element e.
SymTensor2 element_strain(const Mesh& mesh, const ElementGeometry& geom,
                          std::span<const double> u, int e);

struct AssembledSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
};

/// Phase-field operator: grad-grad + reaction terms driven by H; natural
/// boundary conditions everywhere, so no constraints apply here.
AssembledSystem assemble_phase_field(const Mesh& mesh, const QuadHistory& h,
                                     const MaterialParams& m, bool parallel = true);

/// Displacement operator with the modified tangent; branch strain comes
/// from u_prev, s is interpolated at quadrature points. Zero body force.
AssembledSystem assemble_displacement(const Mesh& mesh, std::span<const double> u_prev,
                                      std::span<const double> s, const MaterialParams& m,
                                      bool parallel = true);

/// Symmetric elimination: keeps size and SPD, unit diagonal on
/// constrained dofs.
void apply_dirichlet(AssembledSystem& system, const DirichletSet& bc);

struct Reaction {
  double fx = 0.0;
  double fy = 0.0;
};

/// Boundary traction integral over the edges tagged `tag`, outward normal,
/// 2-point Gauss per edge, strain from the adjacent triangle.
Reaction reaction_force(const Mesh& mesh, const std::string& tag, std::span<const double> u,
                        std::span<const double> s, const MaterialParams& m);

/// Elementwise-linear (discontinuous P1) field stored as vertex values.
struct ElementLinearField {
  std::vector<std::array<double, 3>> vertex_values;

  double evaluate(int e, const std::array<double, 3>& bary) const {
    const auto& v = vertex_values[static_cast<std::size_t>(e)];
    return v[0] * bary[0] + v[1] * bary[1] + v[2] * bary[2];
  }
};

/// L2 projection of quadrature data onto the elementwise-linear space;
/// with the 3-point rule this interpolates the data exactly.
ElementLinearField project_quadstate(const Mesh& mesh, const QuadHistory& q);

}  // namespace pffrac

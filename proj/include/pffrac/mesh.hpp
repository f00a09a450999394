/** @file mesh.hpp
 *  @brief Triangular mesh with tagged boundary entities.
 */
#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pffrac/errors.hpp"

namespace pffrac {

struct BoundaryEdge {
  std::array<int, 2> nodes{};
  int tag = 0;
};

struct TaggedPoint {
  int node = 0;
  int tag = 0;
};

struct Mesh {
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<TaggedPoint> tagged_points;
  // (dimension, tag) -> physical name
  std::map<std::pair<int, int>, std::string> physical_names;
  // triangles flipped during parsing to restore positive signed area
  int reoriented_triangles = 0;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
};

double signed_area(const Mesh& mesh, int triangle);

/// Uniform n x n grid on [0,1]^2 split into 2n^2 right triangles. Boundary
/// edges carry tags named "left", "right", "bottom", "top"; the corner
/// (0,0) carries the point tag "origin".
Mesh structured_unit_square(int n);

struct TaggedEntities {
  std::vector<BoundaryEdge> edges;
  std::vector<TaggedPoint> points;
  std::vector<int> nodes;  // union of entity nodes, sorted, unique
};

/// All boundary edges and tagged points whose physical tag resolves to name.
TaggedEntities entities_with_tag(const Mesh& mesh, const std::string& name);

struct MeshFinding {
  std::string code;     // e.g. "non-positive-area"
  std::string message;  // human-readable, carries the entity id
};

struct MeshReport {
  bool pass = true;
  std::vector<MeshFinding> findings;
};

/// Checks areas, index ranges, near-duplicate nodes (1e-12) and orphans.
MeshReport validate(const Mesh& mesh);

}  // namespace pffrac

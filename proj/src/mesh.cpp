#include "pffrac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace pffrac {

double signed_area(const Mesh& mesh, int triangle) {
  const auto& t = mesh.triangles[static_cast<std::size_t>(triangle)];
  const auto& a = mesh.nodes[static_cast<std::size_t>(t[0])];
  const auto& b = mesh.nodes[static_cast<std::size_t>(t[1])];
  const auto& c = mesh.nodes[static_cast<std::size_t>(t[2])];
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

Mesh structured_unit_square(int n) {
  if (n < 1) {
    throw ParameterError("structured_unit_square: n must be >= 1, got " + std::to_string(n));
  }

  Mesh mesh;
  const int stride = n + 1;
  mesh.nodes.reserve(static_cast<std::size_t>(stride) * stride);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.nodes.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }

  auto id = [stride](int i, int j) { return j * stride + i; };

  mesh.triangles.reserve(static_cast<std::size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j);
      const int v10 = id(i + 1, j);
      const int v01 = id(i, j + 1);
      const int v11 = id(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  const int tag_bottom = 1, tag_right = 2, tag_top = 3, tag_left = 4;
  for (int i = 0; i < n; ++i) {
    mesh.boundary_edges.push_back({{id(i, 0), id(i + 1, 0)}, tag_bottom});
    mesh.boundary_edges.push_back({{id(n, i), id(n, i + 1)}, tag_right});
    mesh.boundary_edges.push_back({{id(i, n), id(i + 1, n)}, tag_top});
    mesh.boundary_edges.push_back({{id(0, i), id(0, i + 1)}, tag_left});
  }
  mesh.tagged_points.push_back({id(0, 0), 1});

  mesh.physical_names[{1, tag_bottom}] = "bottom";
  mesh.physical_names[{1, tag_right}] = "right";
  mesh.physical_names[{1, tag_top}] = "top";
  mesh.physical_names[{1, tag_left}] = "left";
  mesh.physical_names[{0, 1}] = "origin";
  mesh.physical_names[{2, 1}] = "domain";
  return mesh;
}

TaggedEntities entities_with_tag(const Mesh& mesh, const std::string& name) {
  std::set<int> edge_tags;
  std::set<int> point_tags;
  bool found = false;
  for (const auto& [key, value] : mesh.physical_names) {
    if (value != name) continue;
    found = true;
    if (key.first == 1) edge_tags.insert(key.second);
    if (key.first == 0) point_tags.insert(key.second);
  }
  if (!found) {
    std::string available;
    for (const auto& [key, value] : mesh.physical_names) {
      if (!available.empty()) available += ", ";
      available += value;
    }
    throw LookupError("entities_with_tag: unknown name \"" + name +
                      "\"; available: " + available);
  }

  TaggedEntities out;
  std::set<int> node_set;
  for (const auto& e : mesh.boundary_edges) {
    if (edge_tags.count(e.tag)) {
      out.edges.push_back(e);
      node_set.insert(e.nodes[0]);
      node_set.insert(e.nodes[1]);
    }
  }
  for (const auto& p : mesh.tagged_points) {
    if (point_tags.count(p.tag)) {
      out.points.push_back(p);
      node_set.insert(p.node);
    }
  }
  out.nodes.assign(node_set.begin(), node_set.end());
  return out;
}

MeshReport validate(const Mesh& mesh) {
  MeshReport report;
  auto add = [&report](const std::string& code, const std::string& message) {
    report.findings.push_back({code, message});
    report.pass = false;
  };

  const int nn = mesh.node_count();
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    bool in_range = true;
    for (int v : tri) {
      if (v < 0 || v >= nn) {
        add("index-out-of-range",
            "triangle " + std::to_string(t) + " references node " + std::to_string(v));
        in_range = false;
      }
    }
    if (in_range && !(signed_area(mesh, t) > 0.0)) {
      add("non-positive-area", "triangle " + std::to_string(t) + " has area " +
                                   std::to_string(signed_area(mesh, t)));
    }
  }
  for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
    for (int v : mesh.boundary_edges[i].nodes) {
      if (v < 0 || v >= nn) {
        add("index-out-of-range",
            "boundary edge " + std::to_string(i) + " references node " + std::to_string(v));
      }
    }
  }
  for (std::size_t i = 0; i < mesh.tagged_points.size(); ++i) {
    const int v = mesh.tagged_points[i].node;
    if (v < 0 || v >= nn) {
      add("index-out-of-range",
          "tagged point " + std::to_string(i) + " references node " + std::to_string(v));
    }
  }

  // Near-duplicate nodes: sort by x then scan a sliding window.
  std::vector<int> order(static_cast<std::size_t>(nn));
  for (int i = 0; i < nn; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&mesh](int a, int b) {
    return mesh.nodes[static_cast<std::size_t>(a)][0] < mesh.nodes[static_cast<std::size_t>(b)][0];
  });
  const double tol = 1e-12;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& pi = mesh.nodes[static_cast<std::size_t>(order[i])];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& pj = mesh.nodes[static_cast<std::size_t>(order[j])];
      if (pj[0] - pi[0] > tol) break;
      if (std::abs(pj[1] - pi[1]) <= tol && std::abs(pj[0] - pi[0]) <= tol) {
        add("duplicate-node", "nodes " + std::to_string(order[i]) + " and " +
                                  std::to_string(order[j]) + " coincide within 1e-12");
      }
    }
  }

  std::vector<bool> referenced(static_cast<std::size_t>(nn), false);
  for (const auto& tri : mesh.triangles) {
    for (int v : tri) {
      if (v >= 0 && v < nn) referenced[static_cast<std::size_t>(v)] = true;
    }
  }
  for (int i = 0; i < nn; ++i) {
    if (!referenced[static_cast<std::size_t>(i)]) {
      add("orphaned-node", "node " + std::to_string(i) + " belongs to no triangle");
    }
  }

  return report;
}

}  // namespace pffrac

#include "pffrac/output.hpp"

#include <cstdio>
#include <fstream>
#include <string>

namespace pffrac {

namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_vtk(const Mesh& mesh, const Snapshot& snap, const std::string& path) {
  if (snap.u.size() != static_cast<std::size_t>(2 * mesh.node_count()) ||
      snap.s.size() != static_cast<std::size_t>(mesh.node_count())) {
    throw ParameterError("write_vtk: field sizes do not match the mesh");
  }

  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "pffrac snapshot step " << snap.step << "\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << mesh.node_count() << " float\n";
  for (const auto& p : mesh.nodes) {
    out << format("%.9g", p[0]) << ' ' << format("%.9g", p[1]) << " 0\n";
  }

  out << "CELLS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << "\n";
  for (const auto& tri : mesh.triangles) {
    out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << "\n";
  }

  out << "CELL_TYPES " << mesh.triangle_count() << "\n";
  for (int e = 0; e < mesh.triangle_count(); ++e) out << "5\n";

  out << "POINT_DATA " << mesh.node_count() << "\n";
  out << "VECTORS displacement float\n";
  for (int i = 0; i < mesh.node_count(); ++i) {
    out << format("%.9g", snap.u[static_cast<std::size_t>(2 * i)]) << ' '
        << format("%.9g", snap.u[static_cast<std::size_t>(2 * i + 1)]) << " 0\n";
  }
  out << "SCALARS phase_field float 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.node_count(); ++i) {
    out << format("%.9g", snap.s[static_cast<std::size_t>(i)]) << "\n";
  }

  if (snap.history) {
    // Cell means; exact at the centroid for elementwise-linear data.
    out << "CELL_DATA " << mesh.triangle_count() << "\n";
    out << "SCALARS history float 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int e = 0; e < mesh.triangle_count(); ++e) {
      const auto& v = snap.history->vertex_values[static_cast<std::size_t>(e)];
      out << format("%.9g", (v[0] + v[1] + v[2]) / 3.0) << "\n";
    }
  }

  if (!out) throw IoError("write failed: " + path);
}

void write_csv(const LoadHistory& history, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "displacement,load\n";
  for (const auto& [v, load] : history.pairs) {
    out << format("%.17g", v) << ',' << format("%.17g", load) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::string snapshot_path(const std::string& out_dir, int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "step_%04d.vtk", step);
  return out_dir + "/" + buf;
}

}  // namespace pffrac

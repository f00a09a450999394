/** @file output.hpp
 *  @brief Snapshot writers: legacy ASCII VTK for fields, CSV for the
 *         load-displacement history.
 *
 *  Formatting is pinned so identical inputs always produce byte-identical
 *  files: VTK numbers use 9 significant digits, CSV uses 17.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pffrac/fem.hpp"
#include "pffrac/mesh.hpp"
#include "pffrac/stagger.hpp"

namespace pffrac {

struct Snapshot {
  int step = 0;
  double v_app = 0.0;
  std::vector<double> u;  // interleaved, sized 2*nodes
  std::vector<double> s;  // sized nodes
  std::optional<ElementLinearField> history;  // written as cell data
};

void write_vtk(const Mesh& mesh, const Snapshot& snap, const std::string& path);

void write_csv(const LoadHistory& history, const std::string& path);

/// `step_%04d.vtk` inside out_dir.
std::string snapshot_path(const std::string& out_dir, int step);

}  // namespace pffrac

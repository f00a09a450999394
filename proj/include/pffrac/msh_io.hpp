/** @file msh_io.hpp
 *  @brief Reader for Gmsh MSH files, ASCII versions 2.2 and 4.1.
 *
 *  Supported element types: 15 (point), 1 (2-node line), 2 (3-node
 *  triangle). Binary files are rejected. Node tags are remapped to dense
 *  0-based indices in file order; triangles with negative signed area are
 *  reoriented and counted.
 */
#pragma once

#include <iosfwd>
#include <string>

#include "pffrac/mesh.hpp"

namespace pffrac {

Mesh parse_msh(std::istream& in);
Mesh parse_msh_text(const std::string& text);
Mesh load_msh(const std::string& path);

}  // namespace pffrac

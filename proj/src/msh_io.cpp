#include "pffrac/msh_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace pffrac {

namespace {

struct RawElement {
  int type = 0;       // 15 point, 1 line, 2 triangle
  int physical = 0;   // 0 when untagged
  std::array<long, 3> nodes{};  // MSH node tags, 1-based
};

struct ParserState {
  std::vector<long> node_tags;
  std::vector<std::array<double, 2>> node_coords;
  std::vector<RawElement> elements;
  std::map<std::pair<int, int>, std::string> physical_names;
  // 4.1 only: (entityDim, entityTag) -> first physical tag
  std::map<std::pair<int, int>, int> entity_physical;
  bool saw_nodes = false;
  bool saw_elements = false;
};

[[noreturn]] void fail(const std::string& message) { throw ParseError("parse_msh: " + message); }

std::string next_line(std::istream& in, const std::string& section) {
  std::string line;
  while (std::getline(in, line)) {
    // Strip trailing CR from files written on Windows.
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  fail("unexpected end of file inside " + section);
}

void skip_section(std::istream& in, const std::string& name) {
  const std::string end = "$End" + name.substr(1);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == end) return;
  }
  fail("section " + name + " is not closed by " + end);
}

int node_count_for_type(int type) {
  switch (type) {
    case 15: return 1;
    case 1: return 2;
    case 2: return 3;
    default: return -1;
  }
}

void read_physical_names(std::istream& in, ParserState& state) {
  std::istringstream header(next_line(in, "$PhysicalNames"));
  int count = 0;
  if (!(header >> count)) fail("bad $PhysicalNames count");
  for (int i = 0; i < count; ++i) {
    const std::string line = next_line(in, "$PhysicalNames");
    std::istringstream ls(line);
    int dim = 0, tag = 0;
    if (!(ls >> dim >> tag)) fail("bad $PhysicalNames entry: " + line);
    const auto open = line.find('"');
    const auto close = line.rfind('"');
    if (open == std::string::npos || close <= open) fail("unquoted physical name: " + line);
    state.physical_names[{dim, tag}] = line.substr(open + 1, close - open - 1);
  }
  if (next_line(in, "$PhysicalNames") != "$EndPhysicalNames") {
    fail("$PhysicalNames is not closed");
  }
}

void read_entities(std::istream& in, ParserState& state) {
  std::istringstream header(next_line(in, "$Entities"));
  long npoints = 0, ncurves = 0, nsurfaces = 0, nvolumes = 0;
  if (!(header >> npoints >> ncurves >> nsurfaces >> nvolumes)) fail("bad $Entities header");

  auto read_entity = [&in, &state](int dim, bool is_point) {
    std::istringstream ls(next_line(in, "$Entities"));
    int tag = 0;
    double coord = 0.0;
    if (!(ls >> tag)) fail("bad entity tag in $Entities");
    const int ncoords = is_point ? 3 : 6;
    for (int c = 0; c < ncoords; ++c) {
      if (!(ls >> coord)) fail("bad entity bounds in $Entities");
    }
    long nphys = 0;
    if (!(ls >> nphys)) fail("bad physical-tag count in $Entities");
    for (long p = 0; p < nphys; ++p) {
      int phys = 0;
      if (!(ls >> phys)) fail("bad physical tag in $Entities");
      if (p == 0) state.entity_physical[{dim, tag}] = phys;
    }
    // Bounding entities of curves/surfaces are irrelevant here.
  };

  for (long i = 0; i < npoints; ++i) read_entity(0, true);
  for (long i = 0; i < ncurves; ++i) read_entity(1, false);
  for (long i = 0; i < nsurfaces; ++i) read_entity(2, false);
  for (long i = 0; i < nvolumes; ++i) read_entity(3, false);
  if (next_line(in, "$Entities") != "$EndEntities") fail("$Entities is not closed");
}

void read_nodes_v2(std::istream& in, ParserState& state) {
  std::istringstream header(next_line(in, "$Nodes"));
  long count = 0;
  if (!(header >> count)) fail("bad $Nodes count");
  for (long i = 0; i < count; ++i) {
    std::istringstream ls(next_line(in, "$Nodes"));
    long tag = 0;
    double x = 0.0, y = 0.0, z = 0.0;
    if (!(ls >> tag >> x >> y >> z)) fail("bad node line in $Nodes");
    state.node_tags.push_back(tag);
    state.node_coords.push_back({x, y});
  }
  if (next_line(in, "$Nodes") != "$EndNodes") fail("$Nodes is not closed");
  state.saw_nodes = true;
}

void read_elements_v2(std::istream& in, ParserState& state) {
  std::istringstream header(next_line(in, "$Elements"));
  long count = 0;
  if (!(header >> count)) fail("bad $Elements count");
  for (long i = 0; i < count; ++i) {
    std::istringstream ls(next_line(in, "$Elements"));
    long id = 0;
    int type = 0, ntags = 0;
    if (!(ls >> id >> type >> ntags)) fail("bad element line in $Elements");
    const int nnodes = node_count_for_type(type);
    if (nnodes < 0) fail("unsupported element type " + std::to_string(type));
    RawElement el;
    el.type = type;
    for (int t = 0; t < ntags; ++t) {
      int tag = 0;
      if (!(ls >> tag)) fail("bad element tags in $Elements");
      if (t == 0) el.physical = tag;
    }
    for (int v = 0; v < nnodes; ++v) {
      if (!(ls >> el.nodes[static_cast<std::size_t>(v)])) fail("bad element nodes in $Elements");
    }
    state.elements.push_back(el);
  }
  if (next_line(in, "$Elements") != "$EndElements") fail("$Elements is not closed");
  state.saw_elements = true;
}

void read_nodes_v4(std::istream& in, ParserState& state) {
  std::istringstream header(next_line(in, "$Nodes"));
  long nblocks = 0, nnodes = 0, min_tag = 0, max_tag = 0;
  if (!(header >> nblocks >> nnodes >> min_tag >> max_tag)) fail("bad $Nodes header");
  for (long b = 0; b < nblocks; ++b) {
    std::istringstream bs(next_line(in, "$Nodes"));
    int dim = 0, tag = 0, parametric = 0;
    long in_block = 0;
    if (!(bs >> dim >> tag >> parametric >> in_block)) fail("bad $Nodes block header");
    std::vector<long> tags(static_cast<std::size_t>(in_block));
    for (long i = 0; i < in_block; ++i) {
      std::istringstream ls(next_line(in, "$Nodes"));
      if (!(ls >> tags[static_cast<std::size_t>(i)])) fail("bad node tag in $Nodes");
    }
    for (long i = 0; i < in_block; ++i) {
      std::istringstream ls(next_line(in, "$Nodes"));
      double x = 0.0, y = 0.0, z = 0.0;
      if (!(ls >> x >> y >> z)) fail("bad node coordinates in $Nodes");
      state.node_tags.push_back(tags[static_cast<std::size_t>(i)]);
      state.node_coords.push_back({x, y});
    }
  }
  if (next_line(in, "$Nodes") != "$EndNodes") fail("$Nodes is not closed");
  state.saw_nodes = true;
}

void read_elements_v4(std::istream& in, ParserState& state) {
  std::istringstream header(next_line(in, "$Elements"));
  long nblocks = 0, nelements = 0, min_tag = 0, max_tag = 0;
  if (!(header >> nblocks >> nelements >> min_tag >> max_tag)) fail("bad $Elements header");
  for (long b = 0; b < nblocks; ++b) {
    std::istringstream bs(next_line(in, "$Elements"));
    int dim = 0, tag = 0, type = 0;
    long in_block = 0;
    if (!(bs >> dim >> tag >> type >> in_block)) fail("bad $Elements block header");
    const int nnodes = node_count_for_type(type);
    if (nnodes < 0) fail("unsupported element type " + std::to_string(type));
    int physical = 0;
    if (auto it = state.entity_physical.find({dim, tag}); it != state.entity_physical.end()) {
      physical = it->second;
    }
    for (long i = 0; i < in_block; ++i) {
      std::istringstream ls(next_line(in, "$Elements"));
      long id = 0;
      if (!(ls >> id)) fail("bad element line in $Elements");
      RawElement el;
      el.type = type;
      el.physical = physical;
      for (int v = 0; v < nnodes; ++v) {
        if (!(ls >> el.nodes[static_cast<std::size_t>(v)])) fail("bad element nodes in $Elements");
      }
      state.elements.push_back(el);
    }
  }
  if (next_line(in, "$Elements") != "$EndElements") fail("$Elements is not closed");
  state.saw_elements = true;
}

Mesh finalize(ParserState& state) {
  std::unordered_map<long, int> tag_to_index;
  tag_to_index.reserve(state.node_tags.size());
  for (std::size_t i = 0; i < state.node_tags.size(); ++i) {
    tag_to_index.emplace(state.node_tags[i], static_cast<int>(i));
  }

  Mesh mesh;
  mesh.nodes = std::move(state.node_coords);
  mesh.physical_names = std::move(state.physical_names);

  auto resolve = [&tag_to_index](long tag) {
    auto it = tag_to_index.find(tag);
    if (it == tag_to_index.end()) {
      throw IntegrityError("parse_msh: element references unknown node tag " +
                           std::to_string(tag));
    }
    return it->second;
  };

  for (const RawElement& el : state.elements) {
    if (el.type == 2) {
      mesh.triangles.push_back({resolve(el.nodes[0]), resolve(el.nodes[1]), resolve(el.nodes[2])});
    } else if (el.type == 1) {
      if (el.physical == 0) continue;
      mesh.boundary_edges.push_back({{resolve(el.nodes[0]), resolve(el.nodes[1])}, el.physical});
    } else if (el.type == 15) {
      if (el.physical == 0) continue;
      mesh.tagged_points.push_back({resolve(el.nodes[0]), el.physical});
    }
  }

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    if (signed_area(mesh, t) < 0.0) {
      auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
      std::swap(tri[1], tri[2]);
      ++mesh.reoriented_triangles;
    }
  }
  return mesh;
}

}  // namespace

Mesh parse_msh(std::istream& in) {
  ParserState state;
  bool saw_format = false;
  bool v4 = false;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] != '$') {
      if (!saw_format) fail("file does not start with $MeshFormat");
      fail("stray data outside sections: " + line);
    }

    if (line == "$MeshFormat") {
      std::istringstream ls(next_line(in, "$MeshFormat"));
      std::string version;
      int file_type = 0, data_size = 0;
      if (!(ls >> version >> file_type >> data_size)) fail("bad $MeshFormat line");
      if (file_type != 0) fail("binary MSH files are not supported (file-type " +
                               std::to_string(file_type) + ")");
      if (version == "4.1") {
        v4 = true;
      } else if (version != "2.2") {
        fail("unsupported MSH version " + version + " (expected 2.2 or 4.1)");
      }
      if (next_line(in, "$MeshFormat") != "$EndMeshFormat") fail("$MeshFormat is not closed");
      saw_format = true;
    } else if (line == "$PhysicalNames") {
      read_physical_names(in, state);
    } else if (line == "$Entities") {
      read_entities(in, state);
    } else if (line == "$Nodes") {
      if (!saw_format) fail("$Nodes before $MeshFormat");
      v4 ? read_nodes_v4(in, state) : read_nodes_v2(in, state);
    } else if (line == "$Elements") {
      if (!saw_format) fail("$Elements before $MeshFormat");
      v4 ? read_elements_v4(in, state) : read_elements_v2(in, state);
    } else {
      skip_section(in, line);
    }
  }

  if (!saw_format) fail("missing $MeshFormat section");
  if (!state.saw_nodes) fail("missing $Nodes section");
  if (!state.saw_elements) fail("missing $Elements section");
  return finalize(state);
}

Mesh parse_msh_text(const std::string& text) {
  std::istringstream in(text);
  return parse_msh(in);
}

Mesh load_msh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_msh: cannot open " + path);
  return parse_msh(in);
}

}  // namespace pffrac

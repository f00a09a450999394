#include "pffrac/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pffrac {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(where + ": unknown key \"" + key + "\"");
    }
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
  if (!obj[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return obj[key].get<double>();
}

std::string text(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
  if (!obj[key].is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return obj[key].get<std::string>();
}

}  // namespace

MaterialParams RunConfig::make_material() const {
  return MaterialParams::make(material.E, material.nu, material.Gc, material.ls, material.eta,
                              material.mode);
}

RunConfig parse_config_text(const std::string& content, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::parse_error& err) {
    throw ConfigError(origin + ": " + err.what());
  }
  if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");

  check_keys(doc,
             {"mesh_path", "material", "schedule", "dirichlet", "load_tag", "out_dir",
              "snapshot_stride", "clamp_s"},
             origin);

  RunConfig config;
  config.mesh_path = text(doc, "mesh_path", origin);
  config.load_tag = text(doc, "load_tag", origin);

  if (!doc.contains("material") || !doc["material"].is_object()) {
    throw ConfigError(origin + ": missing \"material\" object");
  }
  const json& mat = doc["material"];
  check_keys(mat, {"E", "nu", "Gc", "ls", "eta", "mode"}, origin + ".material");
  config.material.E = number(mat, "E", origin + ".material");
  config.material.nu = number(mat, "nu", origin + ".material");
  config.material.Gc = number(mat, "Gc", origin + ".material");
  config.material.ls = number(mat, "ls", origin + ".material");
  config.material.eta = number(mat, "eta", origin + ".material");
  const std::string mode = text(mat, "mode", origin + ".material");
  if (mode == "plane_stress") {
    config.material.mode = PlanarMode::plane_stress;
  } else if (mode == "plane_strain") {
    config.material.mode = PlanarMode::plane_strain;
  } else {
    throw ConfigError(origin + ".material.mode: expected plane_stress or plane_strain, got \"" +
                      mode + "\"");
  }

  if (!doc.contains("schedule") || !doc["schedule"].is_object()) {
    throw ConfigError(origin + ": missing \"schedule\" object");
  }
  const json& sch = doc["schedule"];
  check_keys(sch, {"v_max", "dv_coarse", "dv_fine", "switch_at", "max_inner", "stag_tol"},
             origin + ".schedule");
  config.schedule.v_max = number(sch, "v_max", origin + ".schedule");
  config.schedule.dv_coarse = number(sch, "dv_coarse", origin + ".schedule");
  config.schedule.dv_fine = number(sch, "dv_fine", origin + ".schedule");
  config.schedule.switch_at = number(sch, "switch_at", origin + ".schedule");
  config.schedule.max_inner = static_cast<int>(number(sch, "max_inner", origin + ".schedule"));
  config.schedule.stag_tol = number(sch, "stag_tol", origin + ".schedule");

  if (!doc.contains("dirichlet") || !doc["dirichlet"].is_array()) {
    throw ConfigError(origin + ": missing \"dirichlet\" array");
  }
  for (std::size_t i = 0; i < doc["dirichlet"].size(); ++i) {
    const json& entry = doc["dirichlet"][i];
    const std::string where = origin + ".dirichlet[" + std::to_string(i) + "]";
    if (!entry.is_object()) throw ConfigError(where + ": expected an object");
    check_keys(entry, {"tag", "axis", "kind", "scale"}, where);
    BoundaryRule rule;
    rule.tag = text(entry, "tag", where);
    const double axis = number(entry, "axis", where);
    if (axis != 0.0 && axis != 1.0) throw ConfigError(where + ".axis: expected 0 or 1");
    rule.axis = static_cast<int>(axis);
    const std::string kind = text(entry, "kind", where);
    if (kind == "zero") {
      rule.kind = BoundaryRule::Kind::zero;
    } else if (kind == "ramp") {
      rule.kind = BoundaryRule::Kind::ramp;
    } else {
      throw ConfigError(where + ".kind: expected \"zero\" or \"ramp\", got \"" + kind + "\"");
    }
    rule.scale = entry.contains("scale") ? number(entry, "scale", where) : 1.0;
    config.dirichlet.push_back(rule);
  }
  if (config.dirichlet.empty()) throw ConfigError(origin + ": dirichlet array is empty");

  if (doc.contains("out_dir")) config.out_dir = text(doc, "out_dir", origin);
  if (doc.contains("snapshot_stride")) {
    config.snapshot_stride = static_cast<int>(number(doc, "snapshot_stride", origin));
    if (config.snapshot_stride < 1) {
      throw ConfigError(origin + ".snapshot_stride: must be >= 1");
    }
  }
  if (doc.contains("clamp_s")) {
    if (!doc["clamp_s"].is_boolean()) throw ConfigError(origin + ".clamp_s: expected a boolean");
    config.clamp_s = doc["clamp_s"].get<bool>();
  }

  try {
    config.schedule.validate();
    config.make_material();
  } catch (const ParameterError& err) {
    throw ConfigError(origin + ": " + err.what());
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  RunConfig config = parse_config_text(buffer.str(), path);
  // A relative mesh path is taken relative to the config file, so presets
  // work no matter where the tool runs from.
  const std::filesystem::path mesh_path(config.mesh_path);
  if (mesh_path.is_relative()) {
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    config.mesh_path = (base / mesh_path).lexically_normal().string();
  }
  return config;
}

}  // namespace pffrac

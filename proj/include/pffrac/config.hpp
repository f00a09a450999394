/** @file config.hpp
 *  @brief Run configuration: JSON schema, strict parsing and validation.
 *
 *  Unknown keys anywhere in the document are errors.
 */
#pragma once

#include <string>
#include <vector>

#include "pffrac/constitutive.hpp"
#include "pffrac/stagger.hpp"

namespace pffrac {

struct RunConfig {
  std::string mesh_path;
  struct {
    double E = 0.0;
    double nu = 0.0;
    double Gc = 0.0;
    double ls = 0.0;
    double eta = 0.0;
    PlanarMode mode = PlanarMode::plane_strain;
  } material;
  LoadSchedule schedule;
  std::vector<BoundaryRule> dirichlet;
  std::string load_tag;
  std::string out_dir = "out";
  int snapshot_stride = 1;
  bool clamp_s = false;

  MaterialParams make_material() const;
};

/// Parses and validates; throws ConfigError with field diagnostics.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace pffrac

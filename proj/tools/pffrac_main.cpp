/** @file pffrac_main.cpp
 *  @brief Command-line front end: run simulations, inspect meshes, verify.
 *
 *  Exit codes: 0 success, 1 verification failure, 2 bad configuration,
 *  3 mesh problem, 4 solver failure, 5 mesh validation findings.
 */
#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pffrac/config.hpp"
#include "pffrac/log.hpp"
#include "pffrac/msh_io.hpp"
#include "pffrac/output.hpp"
#include "pffrac/stagger.hpp"
#include "pffrac/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMesh = 3;
constexpr int kExitSolver = 4;
constexpr int kExitFindings = 5;

int cmd_run(const std::string& config_path, int threads, const std::string& out_dir_override) {
  pffrac::RunConfig config;
  try {
    config = pffrac::load_config(config_path);
  } catch (const pffrac::ConfigError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return kExitConfig;
  }
  if (!out_dir_override.empty()) config.out_dir = out_dir_override;

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif

  pffrac::Mesh mesh;
  try {
    mesh = pffrac::load_msh(config.mesh_path);
    // Resolve every referenced tag before the run starts.
    for (const auto& rule : config.dirichlet) pffrac::entities_with_tag(mesh, rule.tag);
    pffrac::entities_with_tag(mesh, config.load_tag);
  } catch (const pffrac::Error& err) {
    std::fprintf(stderr, "mesh error: %s\n", err.what());
    return kExitMesh;
  }

  try {
    const pffrac::MaterialParams material = config.make_material();

    std::filesystem::create_directories(config.out_dir);

    pffrac::RunSetup setup;
    setup.dirichlet = config.dirichlet;
    setup.load_tag = config.load_tag;
    setup.clamp_s = config.clamp_s;
    setup.snapshot_stride = config.snapshot_stride;

    const std::string out_dir = config.out_dir;
    auto sink = [&mesh, &out_dir](const pffrac::StepRecord& record) {
      pffrac::Snapshot snap;
      snap.step = record.step;
      snap.v_app = record.v_app;
      snap.u = *record.u;
      snap.s = *record.s;
      snap.history = pffrac::project_quadstate(mesh, *record.h);
      pffrac::write_vtk(mesh, snap, pffrac::snapshot_path(out_dir, record.step));
    };

    pffrac::RunStats stats;
    const pffrac::LoadHistory history =
        pffrac::run_load_stepping(mesh, material, config.schedule, setup, sink, &stats);
    pffrac::write_csv(history, out_dir + "/load_displacement.csv");

    char summary[256];
    std::snprintf(summary, sizeof(summary),
                  "done: %d steps, %d unconverged inner loops, s in [%.6g, %.6g]", stats.steps,
                  stats.tolerance_misses, stats.min_s, stats.max_s);
    pffrac::log::info(summary);
    return kExitOk;
  } catch (const pffrac::SolverError& err) {
    std::fprintf(stderr, "solver error: %s\n", err.what());
    return kExitSolver;
  } catch (const pffrac::LookupError& err) {
    std::fprintf(stderr, "mesh error: %s\n", err.what());
    return kExitMesh;
  } catch (const pffrac::Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitSolver;
  }
}

int cmd_mesh_info(const std::string& mesh_path) {
  pffrac::Mesh mesh;
  try {
    mesh = pffrac::load_msh(mesh_path);
  } catch (const pffrac::Error& err) {
    std::fprintf(stderr, "mesh error: %s\n", err.what());
    return kExitMesh;
  }

  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  if (!mesh.nodes.empty()) {
    min_x = max_x = mesh.nodes[0][0];
    min_y = max_y = mesh.nodes[0][1];
    for (const auto& p : mesh.nodes) {
      min_x = std::min(min_x, p[0]);
      max_x = std::max(max_x, p[0]);
      min_y = std::min(min_y, p[1]);
      max_y = std::max(max_y, p[1]);
    }
  }

  std::printf("nodes:        %d\n", mesh.node_count());
  std::printf("triangles:    %d\n", mesh.triangle_count());
  std::printf("edges:        %zu tagged\n", mesh.boundary_edges.size());
  std::printf("points:       %zu tagged\n", mesh.tagged_points.size());
  std::printf("bounding box: [%g, %g] x [%g, %g]\n", min_x, max_x, min_y, max_y);
  if (mesh.reoriented_triangles > 0) {
    std::printf("reoriented:   %d triangles\n", mesh.reoriented_triangles);
  }

  std::printf("physical names:\n");
  for (const auto& [key, name] : mesh.physical_names) {
    int count = 0;
    if (key.first == 1) {
      for (const auto& e : mesh.boundary_edges) count += e.tag == key.second ? 1 : 0;
    } else if (key.first == 0) {
      for (const auto& p : mesh.tagged_points) count += p.tag == key.second ? 1 : 0;
    } else if (key.first == 2) {
      count = mesh.triangle_count();
    }
    std::printf("  dim %d tag %d  %-16s %d entities\n", key.first, key.second, name.c_str(),
                count);
  }

  const pffrac::MeshReport report = pffrac::validate(mesh);
  if (report.pass) {
    std::printf("validation:   pass\n");
    return kExitOk;
  }
  std::printf("validation:   %zu findings\n", report.findings.size());
  for (const auto& finding : report.findings) {
    std::printf("  [%s] %s\n", finding.code.c_str(), finding.message.c_str());
  }
  return kExitFindings;
}

int cmd_verify() {
  const auto results = pffrac::run_verification();
  bool all_pass = true;
  std::printf("%-40s %-6s %s\n", "check", "status", "detail");
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("%-40s %-6s %s\n", r.name.c_str(), r.pass ? "pass" : "FAIL", r.detail.c_str());
  }
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-field brittle fracture solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mesh_path;
  std::string out_dir;
  int threads = 0;

  CLI::App* run = app.add_subcommand("run", "Run a configured simulation");
  run->add_option("config", config_path, "JSON run configuration")->required();
  run->add_option("--threads", threads, "OpenMP thread count (results do not depend on it)");
  run->add_option("--out-dir", out_dir, "Override the configured output directory");

  CLI::App* info = app.add_subcommand("mesh-info", "Inspect and validate a mesh file");
  info->add_option("mesh", mesh_path, "Gmsh MSH file (ASCII 2.2 or 4.1)")->required();

  app.add_subcommand("verify", "Run the built-in verification suite");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, threads, out_dir);
  if (info->parsed()) return cmd_mesh_info(mesh_path);
  return cmd_verify();
}

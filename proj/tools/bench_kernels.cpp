/** @file bench_kernels.cpp
 *  @brief Times the OpenMP kernels against their serial references and
 *         checks that both produce identical results.
 */
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pffrac/fem.hpp"
#include "pffrac/mesh.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
double time_best_of(int repeats, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    fn();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 192;
  const int spmv_rounds = 200;

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; comparing identical serial paths\n");
#endif
  std::printf("structured mesh %d x %d: ", n, n);

  const pffrac::Mesh mesh = pffrac::structured_unit_square(n);
  std::printf("%d nodes, %d triangles\n", mesh.node_count(), mesh.triangle_count());

  const pffrac::MaterialParams material =
      pffrac::MaterialParams::make(20.8, 0.3, 5e-4, 0.03, 1e-15,
                                   pffrac::PlanarMode::plane_strain);
  pffrac::QuadHistory history(mesh.triangle_count());
  std::vector<double> u(static_cast<std::size_t>(2 * mesh.node_count()), 0.0);
  std::vector<double> s(static_cast<std::size_t>(mesh.node_count()), 1.0);

  // Assembly: parallel element loop vs plain loop.
  const double t_asm_par = time_best_of(3, [&] {
    pffrac::assemble_displacement(mesh, u, s, material, /*parallel=*/true);
  });
  const double t_asm_ser = time_best_of(3, [&] {
    pffrac::assemble_displacement(mesh, u, s, material, /*parallel=*/false);
  });

  const pffrac::AssembledSystem sys_par = pffrac::assemble_displacement(mesh, u, s, material, true);
  const pffrac::AssembledSystem sys_ser =
      pffrac::assemble_displacement(mesh, u, s, material, false);
  const bool asm_identical = sys_par.matrix.values == sys_ser.matrix.values &&
                             sys_par.matrix.col_indices == sys_ser.matrix.col_indices;

  std::printf("assemble_displacement: serial %.3f s, parallel %.3f s, speedup %.2fx, %s\n",
              t_asm_ser, t_asm_par, t_asm_ser / t_asm_par,
              asm_identical ? "bit-identical" : "MISMATCH");

  // SpMV: OpenMP row loop vs plain loop.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(sys_par.matrix.n));
  for (double& v : x) v = dist(rng);
  std::vector<double> y_par(x.size()), y_ser(x.size());

  const double t_mv_par = time_best_of(3, [&] {
    for (int r = 0; r < spmv_rounds; ++r) sys_par.matrix.multiply(x, y_par);
  });
  const double t_mv_ser = time_best_of(3, [&] {
    for (int r = 0; r < spmv_rounds; ++r) sys_par.matrix.multiply_serial(x, y_ser);
  });
  const bool mv_identical = y_par == y_ser;

  const double gflops = 2.0 * static_cast<double>(sys_par.matrix.nnz()) * spmv_rounds / 1e9;
  std::printf("spmv (%d rounds): serial %.3f s (%.2f GF/s), parallel %.3f s (%.2f GF/s), "
              "speedup %.2fx, %s\n",
              spmv_rounds, t_mv_ser, gflops / t_mv_ser, t_mv_par, gflops / t_mv_par,
              t_mv_ser / t_mv_par, mv_identical ? "bit-identical" : "MISMATCH");

  return asm_identical && mv_identical ? 0 : 1;
}

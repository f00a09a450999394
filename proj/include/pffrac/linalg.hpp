/** @file linalg.hpp
 *  @brief Sparse SPD linear algebra: triplet assembly into CSR and a
 *         Jacobi-preconditioned conjugate-gradient solver.
 *
 *  Everything here is deterministic for fixed inputs regardless of the
 *  OpenMP thread count: matrix-vector products accumulate per row in
 *  stored column order, and global reductions sum fixed-size chunks in
 *  index order.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pffrac/errors.hpp"

namespace pffrac {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Unordered (row, col, value) contributions; duplicates sum on conversion.
class TripletBuffer {
 public:
  TripletBuffer() = default;
  explicit TripletBuffer(std::size_t reserve) { entries_.reserve(reserve); }

  void add(int row, int col, double value) { entries_.push_back({row, col, value}); }

  /// Pre-size so parallel element loops can write disjoint slots by index.
  void resize(std::size_t n) { entries_.resize(n); }
  Triplet& operator[](std::size_t i) { return entries_[i]; }
  const Triplet& operator[](std::size_t i) const { return entries_[i]; }

  std::size_t size() const { return entries_.size(); }
  const std::vector<Triplet>& entries() const { return entries_; }

 private:
  std::vector<Triplet> entries_;
};

/// Compressed sparse row matrix; column indices sorted and unique per row.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_offsets;  // size n+1
  std::vector<int> col_indices;  // size nnz
  std::vector<double> values;    // size nnz

  std::size_t nnz() const { return col_indices.size(); }

  /// y = A x, OpenMP over rows, per-row accumulation in stored order.
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Plain-loop reference kernel kept for tests and the benchmark tool.
  void multiply_serial(std::span<const double> x, std::span<double> y) const;
};

/// Duplicate-summing conversion; output independent of insertion order.
SparseMatrix to_csr(const TripletBuffer& buf, int n);

// Deterministic reductions: partial sums over fixed 4096-element chunks are
// computed in parallel and combined serially in index order, so the result
// is bit-identical for any thread count.
double dot_det(std::span<const double> a, std::span<const double> b);
double norm2_det(std::span<const double> a);

// Serial references for the reduction kernels.
double dot_serial(std::span<const double> a, std::span<const double> b);

struct CgOptions {
  double rel_tol = 1e-10;
  int max_iter = -1;  // -1 means 20*n
};

struct CgInfo {
  int iterations = 0;
  double residual = 0.0;  // final ||Ax-b||_2 / ||b||_2
};

/// Jacobi-preconditioned CG for SPD systems. Returns x with
/// ||Ax-b|| <= rel_tol*||b||; b = 0 short-circuits to x = 0.
/// An optional x0 warm-starts the iteration.
std::vector<double> cg_solve(const SparseMatrix& a, std::span<const double> b,
                             CgOptions opts = {}, CgInfo* info = nullptr,
                             std::span<const double> x0 = {});

}  // namespace pffrac

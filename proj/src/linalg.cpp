#include "pffrac/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pffrac {

namespace {

constexpr std::size_t kChunk = 4096;

struct TripletKey {
  int row;
  int col;
  std::uint64_t bits;  // value bit pattern, part of the sort key so that
                       // permuted inputs accumulate in identical order
};

}  // namespace

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      sum += values[k] * x[col_indices[k]];
    }
    y[i] = sum;
  }
}

void SparseMatrix::multiply_serial(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      sum += values[k] * x[col_indices[k]];
    }
    y[i] = sum;
  }
}

SparseMatrix to_csr(const TripletBuffer& buf, int n) {
  for (const Triplet& t : buf.entries()) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw ParameterError("to_csr: index (" + std::to_string(t.row) + ", " +
                           std::to_string(t.col) + ") out of range for n = " +
                           std::to_string(n));
    }
  }

  std::vector<TripletKey> keys;
  keys.reserve(buf.size());
  for (const Triplet& t : buf.entries()) {
    keys.push_back({t.row, t.col, std::bit_cast<std::uint64_t>(t.value)});
  }
  std::sort(keys.begin(), keys.end(), [](const TripletKey& a, const TripletKey& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.bits < b.bits;
  });

  SparseMatrix m;
  m.n = n;
  m.row_offsets.assign(static_cast<std::size_t>(n) + 1, 0);

  std::size_t i = 0;
  while (i < keys.size()) {
    const int row = keys[i].row;
    const int col = keys[i].col;
    double sum = 0.0;
    while (i < keys.size() && keys[i].row == row && keys[i].col == col) {
      sum += std::bit_cast<double>(keys[i].bits);
      ++i;
    }
    m.col_indices.push_back(col);
    m.values.push_back(sum);
    ++m.row_offsets[static_cast<std::size_t>(row) + 1];
  }
  for (int r = 0; r < n; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
  return m;
}

double dot_det(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  if (nchunks <= 1) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
  }
  std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(begin + kChunk, n);
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += a[i] * b[i];
    partial[static_cast<std::size_t>(c)] = sum;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double norm2_det(std::span<const double> a) { return std::sqrt(dot_det(a, a)); }

double dot_serial(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

std::vector<double> cg_solve(const SparseMatrix& a, std::span<const double> b,
                             CgOptions opts, CgInfo* info,
                             std::span<const double> x0) {
  const int n = a.n;
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : 20 * n;

  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  const double norm_b = norm2_det(b);
  if (info) {
    info->iterations = 0;
    info->residual = 0.0;
  }
  if (norm_b == 0.0) return x;

  std::vector<double> inv_diag(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      if (a.col_indices[k] == i) {
        diag = a.values[k];
        break;
      }
    }
    if (!(diag > 0.0)) {
      throw PreconditionerError("cg_solve: non-positive diagonal entry " +
                                std::to_string(diag) + " at row " + std::to_string(i));
    }
    inv_diag[static_cast<std::size_t>(i)] = 1.0 / diag;
  }

  std::vector<double> r(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n));
  std::vector<double> p(static_cast<std::size_t>(n));
  std::vector<double> ap(static_cast<std::size_t>(n));

  if (!x0.empty()) {
    std::copy(x0.begin(), x0.end(), x.begin());
    a.multiply(x, r);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  } else {
    std::copy(b.begin(), b.end(), r.begin());
  }

  const double tol = opts.rel_tol * norm_b;
  double res_norm = norm2_det(r);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) p[i] = inv_diag[i] * r[i];
  double rho = dot_det(r, p);

  int iter = 0;
  while (res_norm > tol && iter < max_iter) {
    a.multiply(p, ap);
    const double alpha = rho / dot_det(p, ap);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    ++iter;
    if (iter % 64 == 0) {
      // Refresh the recurrence residual to kill accumulated drift.
      a.multiply(x, ap);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rho_next = dot_det(r, z);
    const double beta = rho_next / rho;
    rho = rho_next;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    res_norm = norm2_det(r);
  }

  // Validate against the true residual, not the recurrence.
  a.multiply(x, ap);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i) ap[i] = b[i] - ap[i];
  double true_res = norm2_det(ap);
  while (true_res > tol && iter < max_iter) {
    // Rare: recurrence converged optimistically; continue from the true
    // residual until the bound holds.
    std::copy(ap.begin(), ap.end(), r.begin());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) p[i] = inv_diag[i] * r[i];
    rho = dot_det(r, p);
    res_norm = norm2_det(r);
    while (res_norm > tol && iter < max_iter) {
      a.multiply(p, ap);
      const double alpha = rho / dot_det(p, ap);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (int i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      ++iter;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
      const double rho_next = dot_det(r, z);
      const double beta = rho_next / rho;
      rho = rho_next;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
      res_norm = norm2_det(r);
    }
    a.multiply(x, ap);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) ap[i] = b[i] - ap[i];
    true_res = norm2_det(ap);
  }

  if (true_res > tol) {
    throw SolverError("cg_solve: no convergence in " + std::to_string(iter) +
                          " iterations, residual " + std::to_string(true_res / norm_b),
                      true_res / norm_b);
  }
  if (info) {
    info->iterations = iter;
    info->residual = true_res / norm_b;
  }
  return x;
}

}  // namespace pffrac

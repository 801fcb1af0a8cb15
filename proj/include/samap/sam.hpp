#ifndef SAMAP_SAM_HPP
#define SAMAP_SAM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

#include "samap/dense.hpp"
#include "samap/error.hpp"
#include "samap/sparse.hpp"

namespace samap {

/// Index sets of the least-squares problem for column j of the map.
struct ColumnProblem {
  std::size_t col = 0;
  /// Pattern rows of column j: the unknowns.
  std::vector<std::size_t> J;
  /// Rows touched by A_k(:, J): the equations that depend on the unknowns.
  std::vector<std::size_t> I;
  /// Stored rows of A_0(:, j).
  std::vector<std::size_t> rhs_rows;
};

struct ColumnDiagnostics {
  std::size_t col = 0;
  std::size_t rows_used = 0;
  std::size_t cols_used = 0;
  std::size_t rank = 0;
  bool rank_deficient = false;
  /// ||A_k(I,J) m - A_0(I,j)||_2
  double local_residual = 0.0;
  /// ||A_k(:,J) m - A_0(:,j)||_2, including rows of A_0(:,j) outside I
  double column_residual = 0.0;
};

struct ResidualNorms {
  double residual_fro = 0.0;
  double relative_residual = 0.0;
};

struct SamResult {
  SparseMatrix map;
  double residual_fro = 0.0;
  double relative_residual = 0.0;
  std::size_t nnz_pattern = 0;
  std::size_t nnz_map = 0;
  std::vector<ColumnDiagnostics> per_column;

  std::size_t rank_deficient_columns() const {
    return static_cast<std::size_t>(
        std::count_if(per_column.begin(), per_column.end(), [](const auto& c) { return c.rank_deficient; }));
  }
};

struct SamOptions {
  /// Worker threads for the column loop; output does not depend on this.
  unsigned threads = 1;
};

namespace detail {

inline void require_conformable(const SparseMatrix& a_k, const SparseMatrix& a_0, const SparsityPattern& s) {
  if (!a_k.is_square() || !a_0.is_square() || !s.is_square())
    throw InvalidArgument("SAM requires square source, target and pattern");
  if (a_k.nrows() != a_0.nrows() || s.nrows() != a_k.nrows()) {
    throw InvalidArgument("SAM dimension mismatch: source " + std::to_string(a_k.nrows()) + ", target " +
                          std::to_string(a_0.nrows()) + ", pattern " + std::to_string(s.nrows()));
  }
}

} // namespace detail

inline ColumnProblem build_column_problem(const SparseMatrix& a_k, const SparseMatrix& a_0, const SparsityPattern& s,
                                          std::size_t j) {
  if (j >= s.ncols()) throw InvalidArgument("build_column_problem: column " + std::to_string(j) + " out of range");
  ColumnProblem p;
  p.col = j;
  p.J.assign(s.column(j).begin(), s.column(j).end());
  for (std::size_t m : p.J) {
    const auto rows = a_k.column_rows(m);
    p.I.insert(p.I.end(), rows.begin(), rows.end());
  }
  std::sort(p.I.begin(), p.I.end());
  p.I.erase(std::unique(p.I.begin(), p.I.end()), p.I.end());
  p.rhs_rows.assign(a_0.column_rows(j).begin(), a_0.column_rows(j).end());
  return p;
}

/// Solution of one column problem: map values aligned with problem.J plus diagnostics.
struct ColumnSolution {
  std::vector<double> values;
  ColumnDiagnostics diag;
};

/// Solves min_m ||A_k(I,J) m - A_0(I,j)||_2. `row_pos` is scratch of length n filled with SIZE_MAX
/// and is restored before returning.
inline ColumnSolution solve_column_problem(const SparseMatrix& a_k, const SparseMatrix& a_0,
                                           const ColumnProblem& p, std::vector<std::size_t>& row_pos) {
  ColumnSolution out;
  out.diag.col = p.col;
  out.diag.rows_used = p.I.size();
  out.diag.cols_used = p.J.size();
  out.values.assign(p.J.size(), 0.0);

  const auto rhs_vals = a_0.column_values(p.col);
  double outside2 = 0.0;
  if (p.J.empty() || p.I.empty()) {
    // Nothing to fit: the column of the map is zero.
    for (double v : rhs_vals) outside2 += v * v;
    out.diag.rank_deficient = !p.J.empty();
    out.diag.column_residual = std::sqrt(outside2);
    out.diag.local_residual = 0.0;
    return out;
  }

  for (std::size_t r = 0; r < p.I.size(); ++r) row_pos[p.I[r]] = r;

  DenseMatrix sub(p.I.size(), p.J.size());
  for (std::size_t c = 0; c < p.J.size(); ++c) {
    const auto rows = a_k.column_rows(p.J[c]);
    const auto vals = a_k.column_values(p.J[c]);
    for (std::size_t q = 0; q < rows.size(); ++q) sub(row_pos[rows[q]], c) = vals[q];
  }
  std::vector<double> rhs(p.I.size(), 0.0);
  for (std::size_t q = 0; q < p.rhs_rows.size(); ++q) {
    const std::size_t pos = row_pos[p.rhs_rows[q]];
    if (pos == SIZE_MAX) outside2 += rhs_vals[q] * rhs_vals[q];
    else rhs[pos] = rhs_vals[q];
  }
  for (std::size_t i : p.I) row_pos[i] = SIZE_MAX;

  auto sol = dense_least_squares(sub, rhs);
  out.diag.rank = sol.rank;
  out.diag.rank_deficient = sol.rank_deficient();
  out.values = std::move(sol.x);
  out.diag.local_residual = sol.residual_norm;
  out.diag.column_residual = std::sqrt(sol.residual_norm * sol.residual_norm + outside2);
  return out;
}

/// ||A_k N - A_0||_F and its ratio to ||A_0||_F, column by column without forming R densely.
inline ResidualNorms residual_norms(const SparseMatrix& a_k, const SparseMatrix& a_0, const SparseMatrix& n_map) {
  if (a_k.ncols() != n_map.nrows() || a_k.nrows() != a_0.nrows() || n_map.ncols() != a_0.ncols())
    throw InvalidArgument("residual_norms: nonconformable operands");
  const std::size_t nrows = a_k.nrows();
  std::vector<double> acc(nrows, 0.0);
  std::vector<std::size_t> mark(nrows, SIZE_MAX);
  std::vector<std::size_t> touched;
  double sum2 = 0.0;
  for (std::size_t j = 0; j < n_map.ncols(); ++j) {
    touched.clear();
    auto add = [&](std::size_t i, double v) {
      if (mark[i] != j) {
        mark[i] = j;
        acc[i] = 0.0;
        touched.push_back(i);
      }
      acc[i] += v;
    };
    const auto nrows_j = n_map.column_rows(j);
    const auto nvals_j = n_map.column_values(j);
    for (std::size_t q = 0; q < nrows_j.size(); ++q) {
      const std::size_t m = nrows_j[q];
      const auto rows = a_k.column_rows(m);
      const auto vals = a_k.column_values(m);
      for (std::size_t p = 0; p < rows.size(); ++p) add(rows[p], vals[p] * nvals_j[q]);
    }
    const auto trows = a_0.column_rows(j);
    const auto tvals = a_0.column_values(j);
    for (std::size_t p = 0; p < trows.size(); ++p) add(trows[p], -tvals[p]);
    for (std::size_t i : touched) sum2 += acc[i] * acc[i];
  }
  ResidualNorms r;
  r.residual_fro = std::sqrt(sum2);
  const double norm0 = a_0.frobenius_norm();
  r.relative_residual = norm0 > 0.0 ? r.residual_fro / norm0 : (r.residual_fro == 0.0 ? 0.0 : INFINITY);
  return r;
}

/// N_k = argmin ||A_k N - A_0||_F over maps supported on s, one independent least-squares problem
/// per column.
inline SamResult compute_sam(const SparseMatrix& a_k, const SparseMatrix& a_0, const SparsityPattern& s,
                             const SamOptions& opts = {}) {
  detail::require_conformable(a_k, a_0, s);
  const std::size_t n = s.ncols();
  std::vector<ColumnSolution> columns(n);

  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> row_pos(n, SIZE_MAX);
    for (std::size_t j = begin; j < end; ++j)
      columns[j] = solve_column_problem(a_k, a_0, build_column_problem(a_k, a_0, s, j), row_pos);
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(n, t * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back(work, begin, end);
    }
  }

  std::vector<std::size_t> ptr(n + 1, 0);
  std::vector<std::size_t> idx;
  std::vector<double> val;
  SamResult res;
  res.per_column.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto rows = s.column(j);
    const auto& sol = columns[j];
    for (std::size_t q = 0; q < rows.size(); ++q) {
      if (sol.values[q] != 0.0) {
        idx.push_back(rows[q]);
        val.push_back(sol.values[q]);
      }
    }
    ptr[j + 1] = idx.size();
    res.per_column.push_back(sol.diag);
  }
  res.map = SparseMatrix(SparsityPattern(n, n, std::move(ptr), std::move(idx)), std::move(val));
  res.nnz_pattern = s.nnz();
  res.nnz_map = res.map.nnz();
  const auto norms = residual_norms(a_k, a_0, res.map);
  res.residual_fro = norms.residual_fro;
  res.relative_residual = norms.relative_residual;
  return res;
}

/// Dense A_k^{-1} A_0 by partial-pivot LU. Throws CapExceeded above the dense cap and
/// NumericalError when A_k is numerically singular.
inline DenseMatrix exact_map(const SparseMatrix& a_k, const SparseMatrix& a_0, std::size_t cap = kDefaultDenseCap) {
  if (!a_k.is_square() || a_k.nrows() != a_0.nrows())
    throw InvalidArgument("exact_map: source must be square and match the target's row count");
  const LuFactorization lu(to_dense(a_k, cap));
  return lu.solve(to_dense(a_0, cap));
}

/// Pattern of entries with |value| > drop_tol.
inline SparsityPattern sparsify_dense_map(const DenseMatrix& nhat, double drop_tol) {
  if (!(drop_tol >= 0.0)) throw InvalidArgument("sparsify_dense_map: drop_tol must be nonnegative");
  std::vector<std::size_t> ptr(nhat.cols() + 1, 0);
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < nhat.cols(); ++j) {
    for (std::size_t i = 0; i < nhat.rows(); ++i)
      if (std::abs(nhat(i, j)) > drop_tol) idx.push_back(i);
    ptr[j + 1] = idx.size();
  }
  return {nhat.rows(), nhat.cols(), std::move(ptr), std::move(idx)};
}

} // namespace samap

#endif // SAMAP_SAM_HPP

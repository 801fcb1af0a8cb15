// Test-only reference computations. Nothing here calls into the library's numerical kernels: dense
// arithmetic uses nested vectors, solves use Gauss-Jordan elimination, least squares goes through
// the normal equations and reachability through depth-first search.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "samap/sparse.hpp"

namespace samap::oracle {

using Dense = std::vector<std::vector<double>>;
using BoolDense = std::vector<std::vector<bool>>;

inline Dense dense_of(const SparseMatrix& a) {
  Dense d(a.nrows(), std::vector<double>(a.ncols(), 0.0));
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t j = 0; j < a.ncols(); ++j) d[i][j] = a.at(i, j);
  return d;
}

inline BoolDense bool_of(const SparsityPattern& p) {
  BoolDense b(p.nrows(), std::vector<bool>(p.ncols(), false));
  for (std::size_t i = 0; i < p.nrows(); ++i)
    for (std::size_t j = 0; j < p.ncols(); ++j) b[i][j] = p.contains(i, j);
  return b;
}

inline BoolDense bool_product(const BoolDense& p, const BoolDense& q) {
  const std::size_t n = p.size(), k = q.size(), m = q.empty() ? 0 : q[0].size();
  BoolDense r(n, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t t = 0; t < k; ++t)
        if (p[i][t] && q[t][j]) {
          r[i][j] = true;
          break;
        }
  return r;
}

/// (i, j) set iff j is reachable from i along entries (i -> m for every stored (i, m)), or i == j.
inline BoolDense reachability(const BoolDense& p) {
  const std::size_t n = p.size();
  BoolDense r(n, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> stack{s};
    r[s][s] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        if (p[v][w] && !r[s][w]) {
          r[s][w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return r;
}

/// Solves A X = B by Gauss-Jordan elimination with partial pivoting.
inline Dense gauss_jordan(Dense a, Dense b) {
  const std::size_t n = a.size();
  const std::size_t q = b.empty() ? 0 : b[0].size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (a[p][k] == 0.0) throw std::runtime_error("oracle: singular system");
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    const double d = a[k][k];
    for (std::size_t j = 0; j < n; ++j) a[k][j] /= d;
    for (std::size_t j = 0; j < q; ++j) b[k][j] /= d;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k] == 0.0) continue;
      const double f = a[i][k];
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[k][j];
      for (std::size_t j = 0; j < q; ++j) b[i][j] -= f * b[k][j];
    }
  }
  return b;
}

/// argmin_x ||M x - b|| via the normal equations M^T M x = M^T b.
inline std::vector<double> normal_equations(const Dense& m, const std::vector<double>& b) {
  const std::size_t r = m.size(), c = m.empty() ? 0 : m[0].size();
  Dense g(c, std::vector<double>(c, 0.0));
  Dense rhs(c, std::vector<double>(1, 0.0));
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t t = 0; t < r; ++t) g[i][j] += m[t][i] * m[t][j];
    for (std::size_t t = 0; t < r; ++t) rhs[i][0] += m[t][i] * b[t];
  }
  const Dense x = gauss_jordan(g, rhs);
  std::vector<double> out(c);
  for (std::size_t i = 0; i < c; ++i) out[i] = x[i][0];
  return out;
}

/// Column j of the SAM with pattern rows `rows`, solved over all n rows of A_k.
inline std::vector<double> masked_column(const Dense& ak, const Dense& a0, const std::vector<std::size_t>& rows,
                                         std::size_t j) {
  const std::size_t n = ak.size();
  Dense sub(n, std::vector<double>(rows.size()));
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < rows.size(); ++c) sub[i][c] = ak[i][rows[c]];
    b[i] = a0[i][j];
  }
  return normal_equations(sub, b);
}

inline Dense multiply(const Dense& a, const Dense& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Dense c(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
  return c;
}

inline double frobenius(const Dense& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

inline double frobenius_diff(const Dense& a, const Dense& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) s += (a[i][j] - b[i][j]) * (a[i][j] - b[i][j]);
  return std::sqrt(s);
}

} // namespace samap::oracle

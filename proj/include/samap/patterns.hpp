#ifndef SAMAP_PATTERNS_HPP
#define SAMAP_PATTERNS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "samap/error.hpp"
#include "samap/sparse.hpp"

namespace samap {

/// Largest n accepted by transitive_closure.
inline constexpr std::size_t kDefaultClosureCap = 2048;

/// How the global threshold scales entries with D_ii = |A_ii| (1 when A_ii = 0).
enum class ScalingMode {
  normalized, ///< |A_ij| / sqrt(D_ii D_jj), unit-magnitude scaled diagonal
  literal,    ///< |A_ij| * sqrt(D_ii D_jj), the product D^{1/2} A D^{1/2} taken at face value
};

namespace detail {

inline void require_square(const SparsityPattern& p, const char* op) {
  if (!p.is_square())
    throw InvalidArgument(std::string(op) + ": pattern must be square, got " + std::to_string(p.nrows()) + "x" +
                          std::to_string(p.ncols()));
}

// Assembles a pattern from per-column row lists, inserting the diagonal when requested.
inline SparsityPattern assemble_columns(std::size_t nrows, std::vector<std::vector<std::size_t>>& cols,
                                        bool with_diagonal) {
  std::vector<std::size_t> ptr(cols.size() + 1, 0);
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    auto& c = cols[j];
    if (with_diagonal && j < nrows) c.push_back(j);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    idx.insert(idx.end(), c.begin(), c.end());
    ptr[j + 1] = idx.size();
  }
  return {nrows, cols.size(), std::move(ptr), std::move(idx)};
}

} // namespace detail

/// P ∪ {(i,i)}.
inline SparsityPattern union_with_diagonal(const SparsityPattern& p) {
  detail::require_square(p, "union_with_diagonal");
  std::vector<std::vector<std::size_t>> cols(p.ncols());
  for (std::size_t j = 0; j < p.ncols(); ++j) cols[j].assign(p.column(j).begin(), p.column(j).end());
  return detail::assemble_columns(p.nrows(), cols, true);
}

/// Keeps the diagonal plus off-diagonals whose diagonally scaled magnitude exceeds thresh.
inline SparsityPattern sparsify_global(const SparseMatrix& a, double thresh,
                                       ScalingMode mode = ScalingMode::normalized) {
  detail::require_square(a.pattern(), "sparsify_global");
  if (!(thresh >= 0.0)) throw InvalidArgument("sparsify_global: thresh must be nonnegative");
  const std::size_t n = a.ncols();
  std::vector<double> d(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double aii = std::abs(a.at(i, i));
    if (aii > 0.0) d[i] = aii;
  }
  std::vector<std::vector<std::size_t>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto rows = a.column_rows(j);
    const auto vals = a.column_values(j);
    for (std::size_t p = 0; p < rows.size(); ++p) {
      const std::size_t i = rows[p];
      if (i == j) continue;
      const double s = std::sqrt(d[i] * d[j]);
      const double scaled = mode == ScalingMode::normalized ? std::abs(vals[p]) / s : std::abs(vals[p]) * s;
      if (scaled > thresh) cols[j].push_back(i);
    }
  }
  return detail::assemble_columns(n, cols, true);
}

/// Per column keeps the diagonal plus entries with |A_ij| > (1 - tau) * max_i |A_ij|.
inline SparsityPattern sparsify_column_threshold(const SparseMatrix& a, double tau) {
  detail::require_square(a.pattern(), "sparsify_column_threshold");
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("sparsify_column_threshold: tau must lie in [0, 1]");
  const std::size_t n = a.ncols();
  std::vector<std::vector<std::size_t>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto rows = a.column_rows(j);
    const auto vals = a.column_values(j);
    double col_max = 0.0;
    for (double v : vals) col_max = std::max(col_max, std::abs(v));
    const double cutoff = (1.0 - tau) * col_max;
    for (std::size_t p = 0; p < rows.size(); ++p)
      if (std::abs(vals[p]) > cutoff) cols[j].push_back(rows[p]);
  }
  return detail::assemble_columns(n, cols, true);
}

/// Per column keeps the lfil largest-magnitude stored entries (ties go to the smaller row index)
/// plus the diagonal. Never introduces entries absent from A other than the diagonal.
inline SparsityPattern sparsify_lfil(const SparseMatrix& a, std::size_t lfil) {
  detail::require_square(a.pattern(), "sparsify_lfil");
  if (lfil < 1) throw InvalidArgument("sparsify_lfil: lfil must be at least 1");
  const std::size_t n = a.ncols();
  std::vector<std::vector<std::size_t>> cols(n);
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < n; ++j) {
    const auto rows = a.column_rows(j);
    const auto vals = a.column_values(j);
    order.resize(rows.size());
    for (std::size_t p = 0; p < rows.size(); ++p) order[p] = p;
    // rows are ascending, so a stable sort on magnitude keeps smaller rows first among ties
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return std::abs(vals[x]) > std::abs(vals[y]); });
    const std::size_t keep = std::min(lfil, order.size());
    for (std::size_t q = 0; q < keep; ++q) cols[j].push_back(rows[order[q]]);
  }
  return detail::assemble_columns(n, cols, true);
}

/// Boolean product: (i,j) present iff some m has (i,m) in p and (m,j) in q.
inline SparsityPattern pattern_multiply(const SparsityPattern& p, const SparsityPattern& q) {
  if (p.ncols() != q.nrows()) {
    throw InvalidArgument("pattern_multiply: inner dimensions differ (" + std::to_string(p.ncols()) + " vs " +
                          std::to_string(q.nrows()) + ")");
  }
  const std::size_t nrows = p.nrows();
  const std::size_t ncols = q.ncols();
  std::vector<std::size_t> mark(nrows, SIZE_MAX);
  std::vector<std::size_t> ptr(ncols + 1, 0);
  std::vector<std::size_t> idx;
  std::vector<std::size_t> col;
  for (std::size_t j = 0; j < ncols; ++j) {
    col.clear();
    for (std::size_t m : q.column(j)) {
      for (std::size_t i : p.column(m)) {
        if (mark[i] != j) {
          mark[i] = j;
          col.push_back(i);
        }
      }
    }
    std::sort(col.begin(), col.end());
    idx.insert(idx.end(), col.begin(), col.end());
    ptr[j + 1] = idx.size();
  }
  return {nrows, ncols, std::move(ptr), std::move(idx)};
}

/// Level-l neighbor pattern: the boolean power (P ∪ I)^(l+1). Level 0 is P ∪ I itself.
inline SparsityPattern expand_level(const SparsityPattern& p, std::size_t level) {
  const SparsityPattern base = union_with_diagonal(p);
  SparsityPattern result = base;
  for (std::size_t l = 0; l < level; ++l) {
    SparsityPattern next = pattern_multiply(base, result);
    if (next == result) break; // fixed point reached
    result = std::move(next);
  }
  return result;
}

/// Reachability pattern of the adjacency graph (diagonal included), by repeated boolean squaring.
inline SparsityPattern transitive_closure(const SparsityPattern& p, std::size_t cap = kDefaultClosureCap) {
  detail::require_square(p, "transitive_closure");
  const std::size_t n = p.nrows();
  if (n > cap)
    throw CapExceeded("transitive_closure refused: n = " + std::to_string(n) + " exceeds closure cap " +
                      std::to_string(cap));

  const std::size_t words = (n + 63) / 64;
  using Bits = std::vector<std::uint64_t>;
  std::vector<Bits> cols(n, Bits(words, 0));
  for (std::size_t j = 0; j < n; ++j) {
    cols[j][j / 64] |= std::uint64_t{1} << (j % 64);
    for (std::size_t i : p.column(j)) cols[j][i / 64] |= std::uint64_t{1} << (i % 64);
  }

  for (;;) {
    std::vector<Bits> squared(n, Bits(words, 0));
    bool changed = false;
    for (std::size_t j = 0; j < n; ++j) {
      auto& out = squared[j];
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t bits = cols[j][w];
        while (bits != 0) {
          const std::size_t m = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
          bits &= bits - 1;
          const auto& src = cols[m];
          for (std::size_t v = 0; v < words; ++v) out[v] |= src[v];
        }
      }
      if (out != cols[j]) changed = true;
    }
    cols = std::move(squared);
    if (!changed) break;
  }

  std::vector<std::size_t> ptr(n + 1, 0);
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t bits = cols[j][w];
      while (bits != 0) {
        idx.push_back(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
        bits &= bits - 1;
      }
    }
    ptr[j + 1] = idx.size();
  }
  return {n, n, std::move(ptr), std::move(idx)};
}

} // namespace samap

#endif // SAMAP_PATTERNS_HPP

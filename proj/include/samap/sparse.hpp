#ifndef SAMAP_SPARSE_HPP
#define SAMAP_SPARSE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "samap/dense.hpp"
#include "samap/error.hpp"

namespace samap {

/// Default largest n for which dense n x n arrays are materialized.
inline constexpr std::size_t kDefaultDenseCap = 4000;

/// Boolean compressed-column index set. Row indices are sorted and unique within each column.
class SparsityPattern {
public:
  SparsityPattern() : col_ptr_(1, 0) {}

  /// Empty pattern of the given shape.
  SparsityPattern(std::size_t nrows, std::size_t ncols)
      : nrows_(nrows), ncols_(ncols), col_ptr_(ncols + 1, 0) {}

  /// Takes ownership of compressed-column arrays; throws InvalidArgument if they are malformed.
  SparsityPattern(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> col_ptr,
                  std::vector<std::size_t> row_idx)
      : nrows_(nrows), ncols_(ncols), col_ptr_(std::move(col_ptr)), row_idx_(std::move(row_idx)) {
    validate();
  }

  static SparsityPattern diagonal(std::size_t n) {
    std::vector<std::size_t> ptr(n + 1);
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j <= n; ++j) ptr[j] = j;
    for (std::size_t j = 0; j < n; ++j) idx[j] = j;
    return {n, n, std::move(ptr), std::move(idx)};
  }

  static SparsityPattern full(std::size_t nrows, std::size_t ncols) {
    std::vector<std::size_t> ptr(ncols + 1);
    std::vector<std::size_t> idx;
    idx.reserve(nrows * ncols);
    for (std::size_t j = 0; j < ncols; ++j) {
      ptr[j] = idx.size();
      for (std::size_t i = 0; i < nrows; ++i) idx.push_back(i);
    }
    ptr[ncols] = idx.size();
    return {nrows, ncols, std::move(ptr), std::move(idx)};
  }

  std::size_t nrows() const { return nrows_; }
  std::size_t ncols() const { return ncols_; }
  std::size_t nnz() const { return row_idx_.size(); }
  bool is_square() const { return nrows_ == ncols_; }

  std::span<const std::size_t> col_ptr() const { return col_ptr_; }
  std::span<const std::size_t> row_idx() const { return row_idx_; }

  /// Sorted row indices of column j.
  std::span<const std::size_t> column(std::size_t j) const {
    return {row_idx_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }

  bool contains(std::size_t i, std::size_t j) const {
    const auto col = column(j);
    return std::binary_search(col.begin(), col.end(), i);
  }

  bool operator==(const SparsityPattern&) const = default;

private:
  void validate() const {
    if (col_ptr_.size() != ncols_ + 1)
      throw InvalidArgument("col_ptr length must be ncols+1");
    if (col_ptr_.front() != 0) throw InvalidArgument("col_ptr[0] must be 0");
    if (col_ptr_.back() != row_idx_.size())
      throw InvalidArgument("col_ptr[ncols] must equal the number of row indices");
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (col_ptr_[j] > col_ptr_[j + 1]) throw InvalidArgument("col_ptr must be non-decreasing");
      for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
        if (row_idx_[p] >= nrows_)
          throw InvalidArgument("row index " + std::to_string(row_idx_[p]) + " out of range in column " +
                                std::to_string(j));
        if (p > col_ptr_[j] && row_idx_[p - 1] >= row_idx_[p])
          throw InvalidArgument("row indices must be strictly increasing in column " + std::to_string(j));
      }
    }
  }

  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::size_t> row_idx_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed-column real matrix. Explicit zeros are never stored.
class SparseMatrix {
public:
  SparseMatrix() = default;

  /// Takes a validated pattern plus aligned values; throws if sizes differ or a value is zero.
  SparseMatrix(SparsityPattern pattern, std::vector<double> values)
      : pattern_(std::move(pattern)), values_(std::move(values)) {
    if (values_.size() != pattern_.nnz()) throw InvalidArgument("values must align with row indices");
    for (double v : values_)
      if (v == 0.0) throw InvalidArgument("explicit zero stored in sparse matrix");
  }

  /// Assembles from (row, col, value) triplets. Duplicates are summed; entries that end up exactly
  /// zero are dropped.
  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols, std::span<const Triplet> triplets) {
    for (const auto& t : triplets) {
      if (t.row >= nrows || t.col >= ncols) {
        throw InvalidArgument("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) + ", " +
                              std::to_string(t.value) + ") out of range for " + std::to_string(nrows) + "x" +
                              std::to_string(ncols) + " matrix");
      }
    }
    std::vector<Triplet> sorted(triplets.begin(), triplets.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
      return a.col != b.col ? a.col < b.col : a.row < b.row;
    });

    std::vector<std::size_t> ptr(ncols + 1, 0);
    std::vector<std::size_t> idx;
    std::vector<double> val;
    idx.reserve(sorted.size());
    val.reserve(sorted.size());
    for (std::size_t p = 0; p < sorted.size();) {
      const std::size_t i = sorted[p].row;
      const std::size_t j = sorted[p].col;
      // Sum duplicates in sorted order of value so the result does not depend on input order.
      std::vector<double> dup;
      for (; p < sorted.size() && sorted[p].row == i && sorted[p].col == j; ++p) dup.push_back(sorted[p].value);
      if (dup.size() > 1) std::sort(dup.begin(), dup.end());
      double s = 0.0;
      for (double v : dup) s += v;
      if (s != 0.0) {
        idx.push_back(i);
        val.push_back(s);
        ++ptr[j + 1];
      }
    }
    for (std::size_t j = 0; j < ncols; ++j) ptr[j + 1] += ptr[j];
    return {SparsityPattern(nrows, ncols, std::move(ptr), std::move(idx)), std::move(val)};
  }

  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols, const std::vector<Triplet>& triplets) {
    return from_triplets(nrows, ncols, std::span<const Triplet>(triplets));
  }

  static SparseMatrix identity(std::size_t n) {
    return {SparsityPattern::diagonal(n), std::vector<double>(n, 1.0)};
  }

  std::size_t nrows() const { return pattern_.nrows(); }
  std::size_t ncols() const { return pattern_.ncols(); }
  std::size_t nnz() const { return values_.size(); }
  bool is_square() const { return pattern_.is_square(); }

  const SparsityPattern& pattern() const { return pattern_; }
  std::span<const std::size_t> col_ptr() const { return pattern_.col_ptr(); }
  std::span<const std::size_t> row_idx() const { return pattern_.row_idx(); }
  std::span<const double> values() const { return values_; }

  std::span<const std::size_t> column_rows(std::size_t j) const { return pattern_.column(j); }
  std::span<const double> column_values(std::size_t j) const {
    const auto ptr = pattern_.col_ptr();
    return {values_.data() + ptr[j], ptr[j + 1] - ptr[j]};
  }

  /// Entry (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const {
    const auto rows = column_rows(j);
    const auto it = std::lower_bound(rows.begin(), rows.end(), i);
    if (it == rows.end() || *it != i) return 0.0;
    return column_values(j)[static_cast<std::size_t>(it - rows.begin())];
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
  }

  bool operator==(const SparseMatrix&) const = default;

private:
  SparsityPattern pattern_;
  std::vector<double> values_;
};

inline SparsityPattern pattern_of(const SparseMatrix& a) { return a.pattern(); }

/// True iff every index of p is also an index of q.
inline bool is_subset(const SparsityPattern& p, const SparsityPattern& q) {
  if (p.nrows() != q.nrows() || p.ncols() != q.ncols()) {
    throw InvalidArgument("is_subset: dimension mismatch (" + std::to_string(p.nrows()) + "x" +
                          std::to_string(p.ncols()) + " vs " + std::to_string(q.nrows()) + "x" +
                          std::to_string(q.ncols()) + ")");
  }
  for (std::size_t j = 0; j < p.ncols(); ++j) {
    const auto a = p.column(j);
    const auto b = q.column(j);
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
  }
  return true;
}

inline DenseMatrix to_dense(const SparseMatrix& a, std::size_t cap = kDefaultDenseCap) {
  if (a.nrows() > cap || a.ncols() > cap) {
    throw CapExceeded("dense conversion refused: " + std::to_string(a.nrows()) + "x" + std::to_string(a.ncols()) +
                      " exceeds dense cap " + std::to_string(cap));
  }
  DenseMatrix d(a.nrows(), a.ncols());
  for (std::size_t j = 0; j < a.ncols(); ++j) {
    const auto rows = a.column_rows(j);
    const auto vals = a.column_values(j);
    for (std::size_t p = 0; p < rows.size(); ++p) d(rows[p], j) = vals[p];
  }
  return d;
}

/// Sparse copy of a dense array keeping entries with |value| > drop_tol (default: all nonzeros).
inline SparseMatrix from_dense(const DenseMatrix& d, double drop_tol = 0.0) {
  std::vector<std::size_t> ptr(d.cols() + 1, 0);
  std::vector<std::size_t> idx;
  std::vector<double> val;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    for (std::size_t i = 0; i < d.rows(); ++i) {
      const double v = d(i, j);
      if (v != 0.0 && std::abs(v) > drop_tol) {
        idx.push_back(i);
        val.push_back(v);
      }
    }
    ptr[j + 1] = idx.size();
  }
  return {SparsityPattern(d.rows(), d.cols(), std::move(ptr), std::move(idx)), std::move(val)};
}

/// y = A x
inline std::vector<double> multiply(const SparseMatrix& a, std::span<const double> x) {
  if (x.size() != a.ncols()) throw InvalidArgument("multiply: vector length mismatch");
  std::vector<double> y(a.nrows(), 0.0);
  for (std::size_t j = 0; j < a.ncols(); ++j) {
    if (x[j] == 0.0) continue;
    const auto rows = a.column_rows(j);
    const auto vals = a.column_values(j);
    for (std::size_t p = 0; p < rows.size(); ++p) y[rows[p]] += vals[p] * x[j];
  }
  return y;
}

} // namespace samap

#endif // SAMAP_SPARSE_HPP

#ifndef SAMAP_BANDED_HPP
#define SAMAP_BANDED_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "samap/dense.hpp"
#include "samap/error.hpp"
#include "samap/sparse.hpp"

namespace samap {

/// Banded LU with partial pivoting for square sparse matrices of small bandwidth.
///
/// Row i is stored over columns [i - kl, i + kl + ku]; the extra kl columns hold fill from row
/// interchanges. Multipliers are kept unpermuted, the LAPACK gbtrf convention.
class BandedLu {
public:
  explicit BandedLu(const SparseMatrix& a) : n_(a.nrows()) {
    if (!a.is_square()) throw InvalidArgument("BandedLu requires a square matrix");
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i : a.column_rows(j)) {
        if (i > j) kl_ = std::max(kl_, i - j);
        else ku_ = std::max(ku_, j - i);
      }
    }
    width_ = 2 * kl_ + ku_ + 1;
    band_.assign(n_ * width_, 0.0);
    piv_.assign(n_, 0);

    double norm_inf = 0.0;
    std::vector<double> row_sums(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      const auto rows = a.column_rows(j);
      const auto vals = a.column_values(j);
      for (std::size_t p = 0; p < rows.size(); ++p) {
        at(rows[p], j) = vals[p];
        row_sums[rows[p]] += std::abs(vals[p]);
      }
    }
    for (double s : row_sums) norm_inf = std::max(norm_inf, s);
    const double tol = kSingularityTolerance * norm_inf;

    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t last_row = std::min(n_ - 1, k + kl_);
      const std::size_t last_col = std::min(n_ - 1, k + kl_ + ku_);
      std::size_t p = k;
      double best = std::abs(at(k, k));
      for (std::size_t i = k + 1; i <= last_row; ++i) {
        if (std::abs(at(i, k)) > best) {
          best = std::abs(at(i, k));
          p = i;
        }
      }
      if (!(best > tol))
        throw NumericalError("banded LU: matrix is numerically singular at step " + std::to_string(k));
      piv_[k] = p;
      if (p != k)
        for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
      const double pivot = at(k, k);
      for (std::size_t i = k + 1; i <= last_row; ++i) {
        const double l = at(i, k) / pivot;
        at(i, k) = l;
        if (l == 0.0) continue;
        for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= l * at(k, j);
      }
    }
  }

  std::size_t lower_bandwidth() const { return kl_; }
  std::size_t upper_bandwidth() const { return ku_; }

  std::vector<double> solve(std::span<const double> b) const {
    if (b.size() != n_) throw InvalidArgument("banded solve: right-hand side length mismatch");
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t k = 0; k < n_; ++k) {
      std::swap(x[k], x[piv_[k]]);
      const std::size_t last_row = std::min(n_ - 1, k + kl_);
      for (std::size_t i = k + 1; i <= last_row; ++i) x[i] -= at(i, k) * x[k];
    }
    for (std::size_t i = n_; i-- > 0;) {
      const std::size_t last_col = std::min(n_ - 1, i + kl_ + ku_);
      double s = x[i];
      for (std::size_t j = i + 1; j <= last_col; ++j) s -= at(i, j) * x[j];
      x[i] = s / at(i, i);
    }
    return x;
  }

private:
  double& at(std::size_t i, std::size_t j) { return band_[i * width_ + (j + kl_ - i)]; }
  double at(std::size_t i, std::size_t j) const { return band_[i * width_ + (j + kl_ - i)]; }

  std::size_t n_ = 0;
  std::size_t kl_ = 0;
  std::size_t ku_ = 0;
  std::size_t width_ = 1;
  std::vector<double> band_;
  std::vector<std::size_t> piv_;
};

} // namespace samap

#endif // SAMAP_BANDED_HPP

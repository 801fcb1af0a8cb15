#ifndef SAMAP_DENSE_HPP
#define SAMAP_DENSE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "samap/error.hpp"

namespace samap {

/// Row-major dense matrix. Used for column subproblems and the exact-map oracle.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const { return data_; }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  bool operator==(const DenseMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Relative pivot threshold below which a matrix is treated as singular.
inline constexpr double kSingularityTolerance = 1e-14;
/// Relative threshold on |R_kk| (against the largest column norm) for numerical rank.
inline constexpr double kRankTolerance = 1e-12;

/// LU factorization with partial (row) pivoting, P A = L U.
class LuFactorization {
public:
  explicit LuFactorization(DenseMatrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n) throw InvalidArgument("LU factorization requires a square matrix");
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});

    double norm_inf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (double v : lu_.row(i)) s += std::abs(v);
      norm_inf = std::max(norm_inf, s);
    }
    const double tol = kSingularityTolerance * norm_inf;

    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        if (std::abs(lu_(i, k)) > best) {
          best = std::abs(lu_(i, k));
          p = i;
        }
      }
      if (!(best > tol)) {
        throw NumericalError("matrix is numerically singular: pivot " + std::to_string(best) +
                             " at step " + std::to_string(k));
      }
      if (p != k) {
        std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
        std::swap(perm_[k], perm_[p]);
      }
      const auto pivot_row = lu_.row(k);
      const double pivot = pivot_row[k];
      for (std::size_t i = k + 1; i < n; ++i) {
        auto r = lu_.row(i);
        const double l = r[k] / pivot;
        r[k] = l;
        if (l == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) r[j] -= l * pivot_row[j];
      }
    }
  }

  std::size_t size() const { return lu_.rows(); }

  /// Solves A X = B for every column of B.
  DenseMatrix solve(const DenseMatrix& b) const {
    const std::size_t n = size();
    if (b.rows() != n) throw InvalidArgument("LU solve: right-hand side has wrong row count");
    const std::size_t q = b.cols();
    DenseMatrix x(n, q);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy(b.row(perm_[i]).begin(), b.row(perm_[i]).end(), x.row(i).begin());
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto xi = x.row(i);
      for (std::size_t k = 0; k < i; ++k) {
        const double l = lu_(i, k);
        if (l == 0.0) continue;
        const auto xk = x.row(k);
        for (std::size_t c = 0; c < q; ++c) xi[c] -= l * xk[c];
      }
    }
    for (std::size_t ii = n; ii-- > 0;) {
      auto xi = x.row(ii);
      for (std::size_t k = ii + 1; k < n; ++k) {
        const double u = lu_(ii, k);
        if (u == 0.0) continue;
        const auto xk = x.row(k);
        for (std::size_t c = 0; c < q; ++c) xi[c] -= u * xk[c];
      }
      const double d = lu_(ii, ii);
      for (std::size_t c = 0; c < q; ++c) xi[c] /= d;
    }
    return x;
  }

  std::vector<double> solve(std::span<const double> b) const {
    DenseMatrix rhs(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
    const DenseMatrix x = solve(rhs);
    return {x.data().begin(), x.data().end()};
  }

private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

struct LeastSquaresSolution {
  std::vector<double> x;
  std::size_t rank = 0;
  /// ||M x - b||_2 evaluated against the original M and b.
  double residual_norm = 0.0;

  bool rank_deficient() const { return rank < x.size(); }
};

namespace detail {

// Householder reflector H = I - beta v v^T with H x = alpha e_0. Returns alpha; v[0] holds the
// modified leading entry, the rest of v is x itself.
struct Reflector {
  double alpha = 0.0;
  double beta = 0.0;
};

inline Reflector make_reflector(std::span<double> x) {
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  const double norm = std::sqrt(norm2);
  if (norm == 0.0) return {};
  const double x0 = x[0];
  const double alpha = x0 >= 0.0 ? -norm : norm;
  const double v0 = x0 - alpha;
  const double vnorm2 = norm2 - x0 * x0 + v0 * v0;
  x[0] = v0;
  return {alpha, vnorm2 > 0.0 ? 2.0 / vnorm2 : 0.0};
}

inline void apply_reflector(std::span<const double> v, double beta, std::span<double> y) {
  if (beta == 0.0) return;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * y[i];
  s *= beta;
  for (std::size_t i = 0; i < v.size(); ++i) y[i] -= s * v[i];
}

} // namespace detail

/// Minimizes ||M x - b||_2 with column-pivoted Householder QR.
///
/// When the numerical rank (|R_kk| > 1e-12 * largest column norm) is below the column count,
/// the trailing block is eliminated with a second orthogonal factorization so the returned x is
/// the minimum-norm minimizer.
inline LeastSquaresSolution dense_least_squares(const DenseMatrix& m, std::span<const double> b) {
  const std::size_t r = m.rows();
  const std::size_t c = m.cols();
  if (r == 0 || c == 0) throw InvalidArgument("least squares: empty system");
  if (b.size() != r) throw InvalidArgument("least squares: right-hand side length mismatch");

  // Column-major working copy.
  std::vector<double> a(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a[i + j * r] = m(i, j);
  auto column = [&](std::size_t j, std::size_t from) {
    return std::span<double>(a.data() + j * r + from, r - from);
  };

  std::vector<double> rhs(b.begin(), b.end());
  std::vector<std::size_t> perm(c);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  double max_norm = 0.0;
  for (std::size_t j = 0; j < c; ++j) {
    double s = 0.0;
    for (double v : column(j, 0)) s += v * v;
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  const double tol = kRankTolerance * max_norm;

  const std::size_t steps = std::min(r, c);
  std::size_t rank = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t p = k;
    double best = -1.0;
    for (std::size_t j = k; j < c; ++j) {
      double s = 0.0;
      for (double v : column(j, k)) s += v * v;
      if (s > best) {
        best = s;
        p = j;
      }
    }
    if (!(std::sqrt(best) > tol)) break;
    if (p != k) {
      std::swap_ranges(column(k, 0).begin(), column(k, 0).end(), column(p, 0).begin());
      std::swap(perm[k], perm[p]);
    }
    auto v = column(k, k);
    const auto h = detail::make_reflector(v);
    for (std::size_t j = k + 1; j < c; ++j) detail::apply_reflector(v, h.beta, column(j, k));
    detail::apply_reflector(v, h.beta, std::span<double>(rhs).subspan(k));
    v[0] = h.alpha; // v below the diagonal is no longer needed
    ++rank;
  }

  auto R = [&](std::size_t i, std::size_t j) { return a[i + j * r]; };
  std::vector<double> y(c, 0.0);

  if (rank == c) {
    for (std::size_t ii = c; ii-- > 0;) {
      double s = rhs[ii];
      for (std::size_t j = ii + 1; j < c; ++j) s -= R(ii, j) * y[j];
      y[ii] = s / R(ii, ii);
    }
  } else if (rank > 0) {
    // W = [R11 R12]^T = Qw [T; 0], so [R11 R12] y = c1 has minimum-norm solution
    // y = Qw [T^{-T} c1; 0].
    std::vector<double> w(c * rank, 0.0);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = i; j < c; ++j) w[j + i * c] = R(i, j);
    std::vector<double> betas(rank);
    std::vector<double> t_diag(rank);
    for (std::size_t k = 0; k < rank; ++k) {
      auto v = std::span<double>(w.data() + k * c + k, c - k);
      const auto h = detail::make_reflector(v);
      for (std::size_t j = k + 1; j < rank; ++j)
        detail::apply_reflector(v, h.beta, std::span<double>(w.data() + j * c + k, c - k));
      betas[k] = h.beta;
      t_diag[k] = h.alpha;
    }
    for (std::size_t i = 0; i < rank; ++i) {
      double s = rhs[i];
      for (std::size_t j = 0; j < i; ++j) s -= w[j + i * c] * y[j];
      y[i] = s / t_diag[i];
    }
    for (std::size_t k = rank; k-- > 0;) {
      const auto v = std::span<const double>(w.data() + k * c + k, c - k);
      detail::apply_reflector(v, betas[k], std::span<double>(y).subspan(k));
    }
  }

  LeastSquaresSolution out;
  out.rank = rank;
  out.x.assign(c, 0.0);
  for (std::size_t j = 0; j < c; ++j) out.x[perm[j]] = y[j];
  double res2 = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    double s = -b[i];
    const auto mi = m.row(i);
    for (std::size_t j = 0; j < c; ++j) s += mi[j] * out.x[j];
    res2 += s * s;
  }
  out.residual_norm = std::sqrt(res2);
  return out;
}

} // namespace samap

#endif // SAMAP_DENSE_HPP

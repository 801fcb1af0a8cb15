#ifndef SAMAP_SHIFTED_HPP
#define SAMAP_SHIFTED_HPP

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "samap/error.hpp"
#include "samap/sequence.hpp"
#include "samap/sparse.hpp"

namespace samap {

/// Shifted systems A_k = K + sigma_k M on an m x m grid, K the five-point Dirichlet Laplacian
/// scaled by 1/h^2.
struct ShiftedConfig {
  enum class MassKind { diagonal, tridiagonal };

  std::size_t m = 30;
  std::vector<double> shifts;
  MassKind mass_kind = MassKind::diagonal;

  std::size_t n() const { return m * m; }

  void validate() const {
    if (m < 2) throw InvalidArgument("shifted: m must be at least 2");
    if (shifts.empty()) throw InvalidArgument("shifted: at least one shift required");
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      if (!(shifts[k] >= 0.0)) throw InvalidArgument("shifted: shifts must be nonnegative");
      if (k > 0 && !(shifts[k] > shifts[k - 1])) throw InvalidArgument("shifted: shifts must be increasing");
    }
  }

  /// sigma_k = step * k for k = 0..count-1.
  static std::vector<double> linear_shifts(std::size_t count, double step) {
    std::vector<double> s(count);
    for (std::size_t k = 0; k < count; ++k) s[k] = step * static_cast<double>(k);
    return s;
  }
};

namespace detail {

inline void append_laplacian(std::size_t m, std::vector<Triplet>& trip) {
  const double h = 1.0 / static_cast<double>(m + 1);
  const double inv_h2 = 1.0 / (h * h);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t p = j * m + i;
      trip.push_back({p, p, 4.0 * inv_h2});
      if (i > 0) trip.push_back({p, p - 1, -inv_h2});
      if (i + 1 < m) trip.push_back({p, p + 1, -inv_h2});
      if (j > 0) trip.push_back({p, p - m, -inv_h2});
      if (j + 1 < m) trip.push_back({p, p + m, -inv_h2});
    }
  }
}

// Identity, or a consistent 1D mass stencil (1/6, 2/3, 1/6) along grid lines in x.
inline void append_mass(std::size_t m, ShiftedConfig::MassKind kind, double scale, std::vector<Triplet>& trip) {
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t p = j * m + i;
      if (kind == ShiftedConfig::MassKind::diagonal) {
        trip.push_back({p, p, scale});
        continue;
      }
      trip.push_back({p, p, scale * (2.0 / 3.0)});
      if (i > 0) trip.push_back({p, p - 1, scale / 6.0});
      if (i + 1 < m) trip.push_back({p, p + 1, scale / 6.0});
    }
  }
}

} // namespace detail

inline SparseMatrix laplacian_5pt(std::size_t m) {
  std::vector<Triplet> trip;
  detail::append_laplacian(m, trip);
  return SparseMatrix::from_triplets(m * m, m * m, trip);
}

inline SparseMatrix mass_matrix(std::size_t m, ShiftedConfig::MassKind kind) {
  std::vector<Triplet> trip;
  detail::append_mass(m, kind, 1.0, trip);
  return SparseMatrix::from_triplets(m * m, m * m, trip);
}

inline MatrixSequence generate_shifted_sequence(const ShiftedConfig& cfg) {
  cfg.validate();
  std::vector<SparseMatrix> mats;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < cfg.shifts.size(); ++k) {
    std::vector<Triplet> trip;
    detail::append_laplacian(cfg.m, trip);
    if (cfg.shifts[k] != 0.0) detail::append_mass(cfg.m, cfg.mass_kind, cfg.shifts[k], trip);
    mats.push_back(SparseMatrix::from_triplets(cfg.n(), cfg.n(), trip));
    std::ostringstream label;
    label << "sigma=" << cfg.shifts[k];
    labels.push_back(label.str());
  }
  return {std::move(mats), std::move(labels)};
}

} // namespace samap

#endif // SAMAP_SHIFTED_HPP

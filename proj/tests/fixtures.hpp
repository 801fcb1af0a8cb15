// Shared fixtures: the 7x7 example pair and random problem generators.
#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <vector>

#include "samap/sparse.hpp"

namespace samap::test {

// Boolean patterns of the 7x7 example pair (row-major, 1 = nonzero).
inline constexpr std::array<std::array<int, 7>, 7> kPair7A0Bool = {{
    {1, 1, 0, 1, 0, 0, 1},
    {0, 1, 1, 0, 0, 0, 1},
    {0, 0, 1, 0, 1, 1, 0},
    {0, 0, 0, 1, 1, 0, 1},
    {0, 0, 0, 0, 1, 0, 1},
    {0, 0, 0, 0, 0, 1, 1},
    {0, 0, 0, 0, 0, 0, 1},
}};
inline constexpr std::array<std::array<int, 7>, 7> kPair7A1Bool = {{
    {1, 1, 0, 1, 0, 0, 1},
    {0, 1, 1, 0, 0, 0, 1},
    {0, 0, 1, 0, 1, 1, 0},
    {0, 0, 0, 1, 1, 0, 1},
    {1, 0, 1, 0, 1, 0, 1},
    {0, 0, 0, 0, 0, 1, 1},
    {1, 0, 0, 0, 0, 1, 1},
}};

// Frozen random values on those patterns (same numbers as data/pair7_A*.mtx). The literal 0/1 A_1 is
// singular, so the numerical checks use these.
inline const std::vector<Triplet> kPair7A0Triplets = {
    {0, 0, 1.44}, {0, 1, 1.85}, {1, 1, 1.7},  {1, 2, 1.2},  {2, 2, 1.99}, {0, 3, 0.84},
    {3, 3, 0.55}, {2, 4, 1.43}, {3, 4, 1.27}, {4, 4, 0.52}, {2, 5, 1.98}, {5, 5, 0.9},
    {0, 6, 0.51}, {1, 6, 1.17}, {3, 6, 1.88}, {4, 6, 1.54}, {5, 6, 1.82}, {6, 6, 1.26},
};
inline const std::vector<Triplet> kPair7A1Triplets = {
    {0, 0, 1.81}, {4, 0, 1.86}, {6, 0, 1.81}, {0, 1, 1.04}, {1, 1, 1.07}, {1, 2, 1.97},
    {2, 2, 0.86}, {4, 2, 0.72}, {0, 3, 0.59}, {3, 3, 1.49}, {2, 4, 0.65}, {3, 4, 0.7},
    {4, 4, 1.89}, {2, 5, 1.95}, {5, 5, 0.86}, {6, 5, 0.54}, {0, 6, 0.73}, {1, 6, 1.51},
    {3, 6, 1.92}, {4, 6, 0.77}, {5, 6, 0.56}, {6, 6, 1.06},
};

inline SparseMatrix from_bool(const std::array<std::array<int, 7>, 7>& b) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      if (b[i][j] != 0) t.push_back({i, j, 1.0});
  return SparseMatrix::from_triplets(7, 7, t);
}

inline SparseMatrix pair7_a0() { return SparseMatrix::from_triplets(7, 7, kPair7A0Triplets); }
inline SparseMatrix pair7_a1() { return SparseMatrix::from_triplets(7, 7, kPair7A1Triplets); }

/// Random n x n matrix with the given off-diagonal density and a diagonal boosted to make it
/// comfortably invertible.
inline SparseMatrix random_invertible(std::size_t n, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) t.push_back({i, i, static_cast<double>(n) * 0.5 + 2.0 + val(rng)});
      else if (keep(rng)) t.push_back({i, j, val(rng)});
    }
  }
  return SparseMatrix::from_triplets(n, n, t);
}

/// Random pattern containing the diagonal.
inline SparsityPattern random_pattern(std::size_t n, double density, std::mt19937_64& rng, bool with_diagonal = true) {
  std::bernoulli_distribution keep(density);
  std::vector<std::size_t> ptr(n + 1, 0), idx;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      if ((with_diagonal && i == j) || keep(rng)) idx.push_back(i);
    ptr[j + 1] = idx.size();
  }
  return {n, n, std::move(ptr), std::move(idx)};
}

} // namespace samap::test

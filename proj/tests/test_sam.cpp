#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "samap/patterns.hpp"
#include "samap/sam.hpp"

namespace samap {
namespace {

TEST(ColumnProblem, Examples) {
  const auto a1 = test::pair7_a1();
  const auto a0 = test::pair7_a0();
  const auto p = build_column_problem(a1, a0, a1.pattern(), 0);
  EXPECT_EQ(p.J, (std::vector<std::size_t>{0, 4, 6}));
  // rows touched by columns 0, 4, 6 of A_1
  EXPECT_EQ(p.I, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6}));

  const auto d = build_column_problem(a1, a0, SparsityPattern::diagonal(7), 0);
  EXPECT_EQ(d.J, (std::vector<std::size_t>{0}));
  EXPECT_EQ(d.I, (std::vector<std::size_t>{0, 4, 6}));
  EXPECT_EQ(d.rhs_rows, (std::vector<std::size_t>{0}));

  // a matrix with an empty row: the full pattern touches only stored rows
  const auto gap = SparseMatrix::from_triplets(3, 3, std::vector<Triplet>{{0, 0, 1.0}, {2, 1, 1.0}, {2, 2, 1.0}});
  EXPECT_EQ(build_column_problem(gap, gap, SparsityPattern::full(3, 3), 1).I, (std::vector<std::size_t>{0, 2}));
  EXPECT_THROW(build_column_problem(gap, gap, SparsityPattern::full(3, 3), 3), InvalidArgument);
}

TEST(Sam, SelfMapIsIdentity) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = test::random_invertible(20, 0.2, rng);
    const auto res = compute_sam(a, a, union_with_diagonal(a.pattern()));
    EXPECT_LT(res.relative_residual, 1e-13);
    for (std::size_t j = 0; j < 20; ++j) EXPECT_NEAR(res.map.at(j, j), 1.0, 1e-13);
  }
}

TEST(Sam, ColumnsMatchMaskedOracle) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ak = test::random_invertible(20, 0.25, rng);
    const auto a0 = test::random_invertible(20, 0.25, rng);
    const auto s = test::random_pattern(20, 0.2, rng);
    const auto res = compute_sam(ak, a0, s);
    const auto dk = oracle::dense_of(ak), d0 = oracle::dense_of(a0);
    for (std::size_t j = 0; j < 20; ++j) {
      const std::vector<std::size_t> rows(s.column(j).begin(), s.column(j).end());
      const auto ref = oracle::masked_column(dk, d0, rows, j);
      for (std::size_t q = 0; q < rows.size(); ++q) ASSERT_NEAR(res.map.at(rows[q], j), ref[q], 1e-10);
    }
  }
}

TEST(Sam, FullPatternReproducesExactMap) {
  std::mt19937_64 rng(50);
  for (std::size_t n : {5u, 17u, 50u}) {
    const auto ak = test::random_invertible(n, 0.2, rng);
    const auto a0 = test::random_invertible(n, 0.2, rng);
    const auto res = compute_sam(ak, a0, SparsityPattern::full(n, n));
    const auto ref = oracle::gauss_jordan(oracle::dense_of(ak), oracle::dense_of(a0));
    EXPECT_LT(oracle::frobenius_diff(oracle::dense_of(res.map), ref) / oracle::frobenius(ref), 1e-10);
    EXPECT_LT(res.relative_residual, 1e-10);
  }
}

TEST(Sam, MapRespectsPatternAndResidualsAreConsistent) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(trial);
    const auto ak = test::random_invertible(n, 0.2, rng);
    const auto a0 = test::random_invertible(n, 0.3, rng);
    const auto s = test::random_pattern(n, 0.1, rng);
    const auto res = compute_sam(ak, a0, s);
    ASSERT_TRUE(is_subset(res.map.pattern(), s));
    double sum2 = 0.0;
    for (const auto& c : res.per_column) sum2 += c.column_residual * c.column_residual;
    ASSERT_NEAR(std::sqrt(sum2), res.residual_fro, 1e-10 * std::max(1.0, res.residual_fro));
    ASSERT_EQ(res.nnz_pattern, s.nnz());
    ASSERT_EQ(res.nnz_map, res.map.nnz());
  }
}

TEST(Sam, ColumnOrderAndThreadsDoNotChangeResult) {
  std::mt19937_64 rng(77);
  const auto ak = test::random_invertible(40, 0.15, rng);
  const auto a0 = test::random_invertible(40, 0.15, rng);
  const auto s = expand_level(ak.pattern(), 1);
  const auto serial = compute_sam(ak, a0, s);
  const auto threaded = compute_sam(ak, a0, s, SamOptions{4});
  ASSERT_EQ(serial.map.pattern(), threaded.map.pattern());
  for (std::size_t p = 0; p < serial.map.nnz(); ++p) ASSERT_EQ(serial.map.values()[p], threaded.map.values()[p]);

  std::vector<std::size_t> row_pos(40, SIZE_MAX);
  for (std::size_t jj = 40; jj-- > 0;) {
    const auto sol = solve_column_problem(ak, a0, build_column_problem(ak, a0, s, jj), row_pos);
    const auto rows = s.column(jj);
    for (std::size_t q = 0; q < rows.size(); ++q) ASSERT_EQ(sol.values[q], serial.map.at(rows[q], jj));
  }
}

TEST(Sam, RankDeficientColumnIsFlagged) {
  // Columns 0 and 1 of A_k are identical, so a pattern column holding both rows is rank deficient.
  const auto ak = SparseMatrix::from_triplets(
      3, 3, std::vector<Triplet>{{0, 0, 1.0}, {1, 0, 2.0}, {0, 1, 1.0}, {1, 1, 2.0}, {2, 2, 1.0}});
  const auto a0 = SparseMatrix::identity(3);
  const auto s = SparsityPattern::full(3, 3);
  const auto res = compute_sam(ak, a0, s);
  EXPECT_EQ(res.rank_deficient_columns(), 3u);
  // minimum-norm: the two copies share the coefficient equally
  EXPECT_NEAR(res.map.at(0, 0), res.map.at(1, 0), 1e-14);
  EXPECT_TRUE(std::isfinite(res.residual_fro));
}

TEST(ResidualNorms, Examples) {
  std::mt19937_64 rng(9);
  const auto ak = test::random_invertible(12, 0.3, rng);
  const auto a0 = test::random_invertible(12, 0.3, rng);

  const SparseMatrix zero = SparseMatrix::from_triplets(12, 12, std::vector<Triplet>{});
  const auto z = residual_norms(ak, a0, zero);
  EXPECT_NEAR(z.residual_fro, a0.frobenius_norm(), 1e-14);
  EXPECT_EQ(z.relative_residual, 1.0);

  const auto exact = from_dense(exact_map(ak, a0));
  EXPECT_LT(residual_norms(ak, a0, exact).residual_fro, 1e-10);

  const auto n = test::random_invertible(12, 0.3, rng);
  const auto dk = oracle::dense_of(ak), d0 = oracle::dense_of(a0), dn = oracle::dense_of(n);
  const double ref = oracle::frobenius_diff(oracle::multiply(dk, dn), d0);
  EXPECT_NEAR(residual_norms(ak, a0, n).residual_fro, ref, 1e-12 * ref);
}

TEST(ExactMap, Examples) {
  std::mt19937_64 rng(12);
  const auto a = test::random_invertible(9, 0.3, rng);
  const auto b = test::random_invertible(9, 0.3, rng);
  const DenseMatrix self = exact_map(a, a);
  const DenseMatrix id = DenseMatrix::identity(9);
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) EXPECT_NEAR(self(i, j), id(i, j), 1e-13);
  const DenseMatrix passthrough = exact_map(SparseMatrix::identity(9), b);
  EXPECT_EQ(passthrough, to_dense(b));
  EXPECT_THROW(exact_map(a, b, 8), CapExceeded);

  const auto singular = SparseMatrix::from_triplets(2, 2, std::vector<Triplet>{{0, 0, 1.0}, {1, 0, 1.0}});
  EXPECT_THROW(exact_map(singular, SparseMatrix::identity(2)), NumericalError);
}

TEST(ExactMap, Pair7SupportIsClosure) {
  const auto a0 = test::pair7_a0();
  const auto a1 = test::pair7_a1();
  EXPECT_EQ(sparsify_dense_map(exact_map(a1, a0), 1e-12), transitive_closure(a1.pattern()));
}

TEST(SparsifyDenseMap, Examples) {
  EXPECT_EQ(sparsify_dense_map(DenseMatrix::identity(4), 0.5), SparsityPattern::diagonal(4));
  DenseMatrix d(2, 3);
  d(0, 0) = 1e-20;
  d(1, 2) = -0.5;
  EXPECT_EQ(sparsify_dense_map(d, 0.0).nnz(), 2u);
  EXPECT_EQ(sparsify_dense_map(d, 0.5).nnz(), 0u);
  EXPECT_THROW(sparsify_dense_map(d, -1.0), InvalidArgument);
}

} // namespace
} // namespace samap

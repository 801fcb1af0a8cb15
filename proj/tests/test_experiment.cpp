#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "samap/experiment.hpp"
#include "samap/matrix_market.hpp"

namespace samap {
namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(Experiment, SelfMapRow) {
  std::mt19937_64 rng(1);
  const auto a = test::random_invertible(15, 0.2, rng);
  const MatrixSequence seq({a, a});
  ExperimentConfig cfg;
  cfg.recipes = {parse_recipe("source")};
  const auto rows = run_experiment(seq, cfg);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].k, 1u);
  EXPECT_EQ(rows[0].recipe, "source");
  EXPECT_LT(rows[0].relative_residual, 1e-13);
  EXPECT_EQ(rows[0].rank_deficient_cols, 0u);
}

TEST(Experiment, RowOrderAndValidation) {
  std::mt19937_64 rng(2);
  const MatrixSequence seq(
      {test::random_invertible(8, 0.3, rng), test::random_invertible(8, 0.3, rng), test::random_invertible(8, 0.3, rng)});
  ExperimentConfig cfg;
  cfg.recipes = {parse_recipe("target"), parse_recipe("lfil:2@level1")};
  cfg.target_index = 1;
  const auto rows = run_experiment(seq, cfg);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].k, 0u);
  EXPECT_EQ(rows[1].recipe, "lfil:2@level1");
  EXPECT_EQ(rows[2].k, 2u);

  cfg.target_index = 3;
  EXPECT_THROW(run_experiment(seq, cfg), InvalidArgument);
  cfg.target_index = 0;
  cfg.recipes.clear();
  EXPECT_THROW(run_experiment(seq, cfg), InvalidArgument);
}

TEST(Experiment, ZeroMapHasUnitResidual) {
  // A_k with a zero column against a pattern that only sees that column: the map is zero.
  const auto ak = SparseMatrix::from_triplets(2, 2, std::vector<Triplet>{{0, 0, 1.0}});
  const auto a0 = SparseMatrix::from_triplets(2, 2, std::vector<Triplet>{{1, 1, 3.0}});
  const auto s = SparsityPattern(2, 2, {0, 0, 1}, {1});
  const auto res = compute_sam(ak, a0, s);
  EXPECT_EQ(res.nnz_map, 0u);
  EXPECT_EQ(res.relative_residual, 1.0);
}

TEST(ReportCsv, Format) {
  std::vector<ReportRow> rows{{1, "col:0.8@level1", 51972, 51000, 0.1 + 0.2, 0, 12.3456},
                              {2, "global:0.1,odd", 3, 2, 1.0 / 3.0, 1, 0.5}};
  std::ostringstream out;
  write_report_csv(rows, out);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "k,recipe,nnz_pattern,nnz_map,rel_residual,rank_def_cols,wall_ms");
  EXPECT_EQ(lines[1], "1,col:0.8@level1,51972,51000,0.30000000000000004,0,12.346");
  EXPECT_EQ(lines[2], "2,\"global:0.1,odd\",3,2,0.33333333333333331,1,0.500");
}

TEST(ClosureCheck, Pair7Passes) {
  const std::filesystem::path data = SAMAP_DATA_DIR;
  const auto v = run_closure_check(read_matrix_market(data / "pair7_A1.mtx"), read_matrix_market(data / "pair7_A0.mtx"));
  EXPECT_TRUE(v.subset_holds);
  EXPECT_TRUE(v.patterns_equal);
  EXPECT_EQ(v.map_nnz, v.closure_nnz);
  EXPECT_TRUE(v.pass());
}

TEST(ClosureCheck, ReversedPairFailsSubset) {
  const auto v = run_closure_check(test::pair7_a0(), test::pair7_a1());
  EXPECT_FALSE(v.subset_holds);
  EXPECT_FALSE(v.pass());
}

TEST(ClosureCheck, RandomNestedPairs) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto source = test::random_invertible(10, 0.15, rng);
    // target supported on a subset of the source pattern
    std::vector<Triplet> t;
    std::uniform_real_distribution<double> val(0.5, 2.0);
    std::bernoulli_distribution keep(0.6);
    for (std::size_t j = 0; j < 10; ++j)
      for (std::size_t i : source.column_rows(j))
        if (i == j || keep(rng)) t.push_back({i, j, val(rng)});
    const auto target = SparseMatrix::from_triplets(10, 10, t);
    const auto v = run_closure_check(source, target);
    EXPECT_TRUE(v.subset_holds);
    EXPECT_TRUE(v.pass()) << "trial " << trial << ": map " << v.map_nnz << " closure " << v.closure_nnz;
  }
}

TEST(ExactMapStudy, Rows) {
  std::mt19937_64 rng(3);
  const MatrixSequence seq({test::random_invertible(12, 0.3, rng), test::random_invertible(12, 0.3, rng)});
  const auto rows = run_exactmap_study(seq, 0, {1e-12, 1e-2});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].k, 0u);
  EXPECT_EQ(rows[0].nnz, 12u); // identity
  EXPECT_GE(rows[2].nnz, rows[3].nnz);

  std::ostringstream out;
  write_exactmap_csv(rows, out);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "k,drop_tol,nnz");
  EXPECT_EQ(lines[1], "0,9.9999999999999998e-13,12");

  EXPECT_THROW(run_exactmap_study(seq, 0, {1e-2}, 10), CapExceeded);
  EXPECT_THROW(run_exactmap_study(seq, 2, {1e-2}), InvalidArgument);
  EXPECT_THROW(run_exactmap_study(seq, 0, {}), InvalidArgument);
}

TEST(SequenceSource, Variants) {
  Cd2dConfig c;
  c.m = 5;
  EXPECT_EQ(load_sequence(SequenceSource{c}).dimension(), 25u);
  ShiftedConfig s;
  s.m = 4;
  s.shifts = {0.0, 1.0};
  EXPECT_EQ(load_sequence(SequenceSource{s}).size(), 2u);
}

} // namespace
} // namespace samap

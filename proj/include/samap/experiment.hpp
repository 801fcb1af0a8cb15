#ifndef SAMAP_EXPERIMENT_HPP
#define SAMAP_EXPERIMENT_HPP

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "samap/cd2d.hpp"
#include "samap/error.hpp"
#include "samap/patterns.hpp"
#include "samap/recipe.hpp"
#include "samap/sam.hpp"
#include "samap/sequence.hpp"
#include "samap/shifted.hpp"

namespace samap {

/// Where a sequence comes from: one of the generators or a manifest of Matrix Market files.
using SequenceSource = std::variant<Cd2dConfig, ShiftedConfig, std::filesystem::path>;

inline MatrixSequence load_sequence(const SequenceSource& src) {
  if (const auto* c = std::get_if<Cd2dConfig>(&src)) return generate_cd2d_sequence(*c).sequence;
  if (const auto* s = std::get_if<ShiftedConfig>(&src)) return generate_shifted_sequence(*s);
  return load_sequence(std::get<std::filesystem::path>(src));
}

struct ExperimentConfig {
  std::vector<PatternRecipe> recipes;
  std::size_t target_index = 0;
  std::size_t dense_cap = kDefaultDenseCap;
  std::vector<double> drop_tols;
  unsigned threads = 1;

  void validate(const MatrixSequence& seq) const {
    if (recipes.empty()) throw InvalidArgument("experiment: at least one recipe required");
    if (seq.empty()) throw InvalidArgument("experiment: empty sequence");
    if (target_index >= seq.size())
      throw InvalidArgument("experiment: target index " + std::to_string(target_index) + " outside sequence of " +
                            std::to_string(seq.size()));
  }
};

struct ReportRow {
  std::size_t k = 0;
  std::string recipe;
  std::size_t nnz_pattern = 0;
  std::size_t nnz_map = 0;
  double relative_residual = 0.0;
  std::size_t rank_deficient_cols = 0;
  double wall_ms = 0.0;
};

/// One SAM per (k, recipe) with k != target, mapping A_k onto A_target. Rows are k-major,
/// recipe-minor.
inline std::vector<ReportRow> run_experiment(const MatrixSequence& seq, const ExperimentConfig& cfg) {
  cfg.validate(seq);
  const SparseMatrix& target = seq[cfg.target_index];
  std::vector<ReportRow> rows;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (k == cfg.target_index) continue;
    for (const auto& recipe : cfg.recipes) {
      const auto start = std::chrono::steady_clock::now();
      const SparsityPattern s = recipe.build(seq[k], target);
      const SamResult res = compute_sam(seq[k], target, s, SamOptions{cfg.threads});
      const auto stop = std::chrono::steady_clock::now();
      ReportRow row;
      row.k = k;
      row.recipe = recipe.label;
      row.nnz_pattern = res.nnz_pattern;
      row.nnz_map = res.nnz_map;
      row.relative_residual = res.relative_residual;
      row.rank_deficient_cols = res.rank_deficient_columns();
      row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_real(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

} // namespace detail

inline constexpr const char* kReportHeader = "k,recipe,nnz_pattern,nnz_map,rel_residual,rank_def_cols,wall_ms";

/// wall_ms is always the last column so the rest of each line is reproducible.
inline void write_report_csv(const std::vector<ReportRow>& rows, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.k << ',' << detail::csv_field(r.recipe) << ',' << r.nnz_pattern << ',' << r.nnz_map << ','
        << detail::format_real(r.relative_residual) << ',' << r.rank_deficient_cols << ',' << std::fixed
        << std::setprecision(3) << r.wall_ms << std::defaultfloat << '\n';
  }
}

inline void write_report_csv(const std::vector<ReportRow>& rows, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  write_report_csv(rows, out);
}

/// Verdict of comparing the exact map's pattern with the closure of the source graph.
struct ClosureVerdict {
  bool subset_holds = false;   ///< S(target) ⊆ S(source)
  bool patterns_equal = false; ///< S(exact map, dropped) == transitive_closure(S(source))
  std::size_t map_nnz = 0;
  std::size_t closure_nnz = 0;

  bool pass() const { return subset_holds && patterns_equal; }
};

inline constexpr double kClosureDropTol = 1e-12;

inline ClosureVerdict run_closure_check(const SparseMatrix& source, const SparseMatrix& target,
                                        std::size_t closure_cap = kDefaultClosureCap,
                                        double drop_tol = kClosureDropTol) {
  if (!source.is_square() || source.nrows() != target.nrows() || !target.is_square())
    throw InvalidArgument("closure-check: matrices must be square and of equal size");
  const SparsityPattern closure = transitive_closure(source.pattern(), closure_cap);
  const SparsityPattern map = sparsify_dense_map(exact_map(source, target, closure_cap), drop_tol);
  ClosureVerdict v;
  v.subset_holds = is_subset(target.pattern(), source.pattern());
  v.patterns_equal = map == closure;
  v.map_nnz = map.nnz();
  v.closure_nnz = closure.nnz();
  return v;
}

struct ExactMapRow {
  std::size_t k = 0;
  double drop_tol = 0.0;
  std::size_t nnz = 0;
};

/// nnz of the exact map A_k^{-1} A_target after dropping |entries| <= drop_tol, for every k
/// (including the target itself) and every drop tolerance.
inline std::vector<ExactMapRow> run_exactmap_study(const MatrixSequence& seq, std::size_t target_index,
                                                   const std::vector<double>& drop_tols,
                                                   std::size_t dense_cap = kDefaultDenseCap) {
  if (seq.empty()) throw InvalidArgument("exactmap-study: empty sequence");
  if (target_index >= seq.size()) throw InvalidArgument("exactmap-study: target index outside sequence");
  if (drop_tols.empty()) throw InvalidArgument("exactmap-study: at least one drop tolerance required");
  if (seq.dimension() > dense_cap)
    throw CapExceeded("exactmap-study refused: n = " + std::to_string(seq.dimension()) + " exceeds dense cap " +
                      std::to_string(dense_cap));
  std::vector<ExactMapRow> rows;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const DenseMatrix nhat = exact_map(seq[k], seq[target_index], dense_cap);
    for (double tol : drop_tols) rows.push_back({k, tol, sparsify_dense_map(nhat, tol).nnz()});
  }
  return rows;
}

inline void write_exactmap_csv(const std::vector<ExactMapRow>& rows, std::ostream& out) {
  out << "k,drop_tol,nnz\n";
  for (const auto& r : rows) out << r.k << ',' << detail::format_real(r.drop_tol) << ',' << r.nnz << '\n';
}

inline void write_exactmap_csv(const std::vector<ExactMapRow>& rows, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  write_exactmap_csv(rows, out);
}

} // namespace samap

#endif // SAMAP_EXPERIMENT_HPP

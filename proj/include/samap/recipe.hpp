#ifndef SAMAP_RECIPE_HPP
#define SAMAP_RECIPE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "samap/error.hpp"
#include "samap/patterns.hpp"
#include "samap/sparse.hpp"

namespace samap {

/// One a-priori sparsification rule. Only the parameter matching `kind` is used.
struct SparsificationStrategy {
  enum class Kind { global_threshold, column_threshold, fixed_nnz };

  Kind kind = Kind::column_threshold;
  double thresh = 0.0;
  double tau = 0.0;
  std::size_t lfil = 1;
  ScalingMode scaling = ScalingMode::normalized;

  static SparsificationStrategy global(double thresh, ScalingMode mode = ScalingMode::normalized) {
    if (!(thresh >= 0.0)) throw InvalidArgument("global threshold must be nonnegative");
    SparsificationStrategy s;
    s.kind = Kind::global_threshold;
    s.thresh = thresh;
    s.scaling = mode;
    return s;
  }
  static SparsificationStrategy column(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("column threshold tau must lie in [0, 1]");
    SparsificationStrategy s;
    s.kind = Kind::column_threshold;
    s.tau = tau;
    return s;
  }
  static SparsificationStrategy fixed(std::size_t lfil) {
    if (lfil < 1) throw InvalidArgument("lfil must be at least 1");
    SparsificationStrategy s;
    s.kind = Kind::fixed_nnz;
    s.lfil = lfil;
    return s;
  }

  SparsityPattern apply(const SparseMatrix& a) const {
    switch (kind) {
    case Kind::global_threshold: return sparsify_global(a, thresh, scaling);
    case Kind::column_threshold: return sparsify_column_threshold(a, tau);
    case Kind::fixed_nnz: return sparsify_lfil(a, lfil);
    }
    throw InvalidArgument("unknown sparsification kind");
  }
};

/// Which matrix of the (source, target) pair a recipe's pattern is derived from.
enum class PatternSource { source_matrix, target_matrix };

/// How to build the map's pattern: optional sparsification, then level expansion.
struct PatternRecipe {
  std::optional<SparsificationStrategy> strategy;
  std::size_t level = 0;
  PatternSource source = PatternSource::source_matrix;
  std::string label;

  /// Pattern for mapping a_k onto a_0.
  SparsityPattern build(const SparseMatrix& a_k, const SparseMatrix& a_0) const {
    const SparseMatrix& from = source == PatternSource::target_matrix ? a_0 : a_k;
    const SparsityPattern base = strategy ? strategy->apply(from) : from.pattern();
    return expand_level(base, level);
  }
};

namespace detail {

inline double parse_real(std::string_view text, std::string_view what, std::string_view spec) {
  const std::string s(text);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size())
    throw InvalidArgument("recipe '" + std::string(spec) + "': bad " + std::string(what) + " '" + s + "'");
  return v;
}

inline std::size_t parse_count(std::string_view text, std::string_view what, std::string_view spec) {
  const std::string s(text);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidArgument("recipe '" + std::string(spec) + "': bad " + std::string(what) + " '" + s + "'");
  return static_cast<std::size_t>(std::stoull(s));
}

} // namespace detail

/// Parses `global:<thresh>[:literal|:normalized]`, `col:<tau>`, `lfil:<k>`, `target` (S(A_0)) or
/// `source` (S(A_k)), each optionally followed by `@level<l>`.
inline PatternRecipe parse_recipe(std::string_view spec) {
  PatternRecipe r;
  r.label = std::string(spec);
  std::string_view body = spec;
  if (const auto at = spec.find('@'); at != std::string_view::npos) {
    const std::string_view mod = spec.substr(at + 1);
    constexpr std::string_view kLevel = "level";
    if (mod.substr(0, kLevel.size()) != kLevel)
      throw InvalidArgument("recipe '" + std::string(spec) + "': unknown modifier '@" + std::string(mod) + "'");
    r.level = detail::parse_count(mod.substr(kLevel.size()), "level", spec);
    body = spec.substr(0, at);
  }

  const auto colon = body.find(':');
  const std::string_view kind = body.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : body.substr(colon + 1);

  if (kind == "target" || kind == "source") {
    if (colon != std::string_view::npos)
      throw InvalidArgument("recipe '" + std::string(spec) + "': '" + std::string(kind) + "' takes no argument");
    r.source = kind == "target" ? PatternSource::target_matrix : PatternSource::source_matrix;
    return r;
  }
  if (colon == std::string_view::npos)
    throw InvalidArgument("recipe '" + std::string(spec) + "': missing parameter");

  if (kind == "global") {
    ScalingMode mode = ScalingMode::normalized;
    std::string_view value = args;
    if (const auto c2 = args.find(':'); c2 != std::string_view::npos) {
      const std::string_view m = args.substr(c2 + 1);
      if (m == "literal") mode = ScalingMode::literal;
      else if (m != "normalized")
        throw InvalidArgument("recipe '" + std::string(spec) + "': unknown scaling mode '" + std::string(m) + "'");
      value = args.substr(0, c2);
    }
    r.strategy = SparsificationStrategy::global(detail::parse_real(value, "threshold", spec), mode);
  } else if (kind == "col") {
    r.strategy = SparsificationStrategy::column(detail::parse_real(args, "tau", spec));
  } else if (kind == "lfil") {
    r.strategy = SparsificationStrategy::fixed(detail::parse_count(args, "lfil", spec));
  } else {
    throw InvalidArgument("recipe '" + std::string(spec) + "': unknown strategy '" + std::string(kind) + "'");
  }
  return r;
}

} // namespace samap

#endif // SAMAP_RECIPE_HPP

#ifndef SAMAP_MATRIX_MARKET_HPP
#define SAMAP_MATRIX_MARKET_HPP

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "samap/error.hpp"
#include "samap/sparse.hpp"

namespace samap {

// Coordinate-format Matrix Market. Files are 1-based; everything in memory is 0-based.

namespace detail {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace detail

inline SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError("empty input, expected %%MatrixMarket header", 1);
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", lineno);
  object = detail::lowercase(object);
  format = detail::lowercase(format);
  field = detail::lowercase(field);
  symmetry = detail::lowercase(symmetry);
  if (object != "matrix") throw ParseError("unsupported object '" + object + "'", lineno);
  if (format != "coordinate") throw ParseError("only coordinate format is supported, got '" + format + "'", lineno);
  const bool is_pattern = field == "pattern";
  if (!is_pattern && field != "real" && field != "integer")
    throw ParseError("unsupported field '" + field + "'", lineno);
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);

  // Size line, after comments and blank lines.
  std::size_t nrows = 0, ncols = 0, nentries = 0;
  for (;;) {
    if (!std::getline(in, line)) throw ParseError("missing size line", lineno + 1);
    ++lineno;
    if (line.empty() || line[0] == '%' || detail::is_blank(line)) continue;
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> nrows >> ncols >> nentries) || (ss >> extra)) throw ParseError("malformed size line", lineno);
    break;
  }
  if (symmetric && nrows != ncols) throw ParseError("symmetric matrix must be square", lineno);

  std::vector<Triplet> triplets;
  triplets.reserve(symmetric ? 2 * nentries : nentries);
  std::size_t seen = 0;
  while (seen < nentries) {
    if (!std::getline(in, line))
      throw ParseError("expected " + std::to_string(nentries) + " entries, found " + std::to_string(seen), lineno + 1);
    ++lineno;
    if (line.empty() || line[0] == '%' || detail::is_blank(line)) continue;
    std::istringstream ss(line);
    long long i = 0, j = 0;
    double v = 1.0;
    if (!(ss >> i >> j)) throw ParseError("malformed entry", lineno);
    if (!is_pattern && !(ss >> v)) throw ParseError("missing value", lineno);
    std::string extra;
    if (ss >> extra) throw ParseError("trailing content '" + extra + "'", lineno);
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > nrows || static_cast<std::size_t>(j) > ncols)
      throw ParseError("index (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range", lineno);
    const auto r = static_cast<std::size_t>(i - 1);
    const auto c = static_cast<std::size_t>(j - 1);
    triplets.push_back({r, c, v});
    if (symmetric && r != c) triplets.push_back({c, r, v});
    ++seen;
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!(line.empty() || line[0] == '%' || detail::is_blank(line)))
      throw ParseError("unexpected content after " + std::to_string(nentries) + " entries", lineno);
  }
  return SparseMatrix::from_triplets(nrows, ncols, triplets);
}

inline SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file " + path.string());
  try {
    return read_matrix_market(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

inline void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.nrows() << ' ' << a.ncols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (std::size_t j = 0; j < a.ncols(); ++j) {
    const auto rows = a.column_rows(j);
    const auto vals = a.column_values(j);
    for (std::size_t p = 0; p < rows.size(); ++p) out << rows[p] + 1 << ' ' << j + 1 << ' ' << vals[p] << '\n';
  }
}

inline void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write matrix file " + path.string());
  write_matrix_market(a, out);
}

inline void write_matrix_market(const SparsityPattern& p, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate pattern general\n";
  out << p.nrows() << ' ' << p.ncols() << ' ' << p.nnz() << '\n';
  for (std::size_t j = 0; j < p.ncols(); ++j)
    for (std::size_t i : p.column(j)) out << i + 1 << ' ' << j + 1 << '\n';
}

inline void write_matrix_market(const SparsityPattern& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write pattern file " + path.string());
  write_matrix_market(p, out);
}

} // namespace samap

#endif // SAMAP_MATRIX_MARKET_HPP

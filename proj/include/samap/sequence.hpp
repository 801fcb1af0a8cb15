#ifndef SAMAP_SEQUENCE_HPP
#define SAMAP_SEQUENCE_HPP

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "samap/error.hpp"
#include "samap/matrix_market.hpp"
#include "samap/sparse.hpp"

namespace samap {

/// Result of checking S(A_0) ⊆ S(A_1) ⊆ ... for consecutive entries.
struct ChainVerdict {
  enum class State { unchecked, holds, violated };

  State state = State::unchecked;
  /// First k with S(A_{k-1}) not contained in S(A_k); meaningful only when violated.
  std::size_t index = 0;

  bool holds() const { return state == State::holds; }
  bool operator==(const ChainVerdict&) const = default;
};

/// Ordered list of square matrices of a common dimension.
class MatrixSequence {
public:
  MatrixSequence() = default;

  MatrixSequence(std::vector<SparseMatrix> entries, std::vector<std::string> labels = {})
      : entries_(std::move(entries)), labels_(std::move(labels)) {
    if (labels_.empty()) {
      for (std::size_t k = 0; k < entries_.size(); ++k) labels_.push_back("A_" + std::to_string(k));
    }
    if (labels_.size() != entries_.size()) throw InvalidArgument("sequence labels must match entries");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (!entries_[k].is_square())
        throw InvalidArgument("sequence entry " + std::to_string(k) + " is not square");
      if (entries_[k].nrows() != entries_.front().nrows())
        throw InvalidArgument("sequence entry " + std::to_string(k) + " has dimension " +
                              std::to_string(entries_[k].nrows()) + ", expected " +
                              std::to_string(entries_.front().nrows()));
    }
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t dimension() const { return entries_.empty() ? 0 : entries_.front().nrows(); }

  const SparseMatrix& operator[](std::size_t k) const { return entries_[k]; }
  const std::vector<SparseMatrix>& entries() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }

  const ChainVerdict& subset_chain() const { return chain_; }
  void set_subset_chain(ChainVerdict v) { chain_ = v; }

private:
  std::vector<SparseMatrix> entries_;
  std::vector<std::string> labels_;
  ChainVerdict chain_;
};

inline ChainVerdict check_sequence(MatrixSequence& seq) {
  if (seq.empty()) throw InvalidArgument("check_sequence: empty sequence");
  ChainVerdict v{ChainVerdict::State::holds, 0};
  for (std::size_t k = 1; k < seq.size(); ++k) {
    if (!is_subset(seq[k - 1].pattern(), seq[k].pattern())) {
      v = {ChainVerdict::State::violated, k};
      break;
    }
  }
  seq.set_subset_chain(v);
  return v;
}

/// Reads a manifest (one matrix path per line, '#' comments). Relative paths resolve against the
/// manifest's directory.
inline std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error("cannot open manifest " + manifest.string());
  const auto base = manifest.parent_path();
  std::vector<std::filesystem::path> paths;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::filesystem::path p = line.substr(first, last - first + 1);
    paths.push_back(p.is_absolute() ? p : base / p);
  }
  if (paths.empty()) throw Error("manifest " + manifest.string() + " lists no matrices");
  return paths;
}

inline MatrixSequence load_sequence(const std::filesystem::path& manifest) {
  std::vector<SparseMatrix> mats;
  std::vector<std::string> labels;
  for (const auto& p : read_manifest(manifest)) {
    mats.push_back(read_matrix_market(p));
    labels.push_back(p.stem().string());
  }
  return {std::move(mats), std::move(labels)};
}

/// Writes A_000.mtx, A_001.mtx, ... and a manifest `sequence.txt` into dir; returns the manifest path.
inline std::filesystem::path write_sequence(const MatrixSequence& seq, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto manifest = dir / "sequence.txt";
  std::ofstream out(manifest);
  if (!out) throw Error("cannot write manifest " + manifest.string());
  out << "# " << seq.size() << " matrices, n = " << seq.dimension() << '\n';
  for (std::size_t k = 0; k < seq.size(); ++k) {
    std::ostringstream name;
    name << "A_" << std::setw(3) << std::setfill('0') << k << ".mtx";
    write_matrix_market(seq[k], dir / name.str());
    out << name.str() << '\n';
  }
  return manifest;
}

} // namespace samap

#endif // SAMAP_SEQUENCE_HPP

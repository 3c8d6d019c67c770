#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sarcaug {

/// Vocabulary-indexed dense vectors, read-only after load. Row norms are
/// precomputed so a neighbor query costs one dot product per row.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  static EmbeddingTable from_rows(
      int dim, const std::vector<std::pair<std::string, std::vector<float>>>& rows);

  int dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t row) const { return words_[row]; }
  std::span<const float> row(std::size_t r) const {
    return {data_.data() + r * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  double norm(std::size_t r) const { return norms_[r]; }

  bool contains(std::string_view w) const;
  std::optional<std::size_t> row_of(std::string_view w) const;
  /// Exact-match vector lookup; nullopt for out-of-vocabulary words.
  std::optional<std::span<const float>> lookup(std::string_view w) const;

  /// Optional speed mode: stores an extra unit-normalized copy of the matrix
  /// so queries skip the per-row divide. Neighbor words can differ from the
  /// exact route only within float rounding of ties, so the deterministic
  /// augmentation path never enables it.
  void precompute_unit_rows();
  bool has_unit_rows() const { return !unit_data_.empty(); }
  const double* unit_rows_ptr(std::size_t r) const {
    return unit_data_.data() + r * static_cast<std::size_t>(dim_);
  }

 private:
  friend EmbeddingTable load_embeddings(const std::filesystem::path&,
                                        struct EmbeddingLoadReport*);
  friend std::optional<EmbeddingTable> load_embedding_cache(
      const std::filesystem::path&, std::uint64_t);

  void append_row(std::string word, const std::vector<float>& values);
  void finalize_norms();

  int dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;       // row-major, size() * dim_
  std::vector<double> norms_;     // Euclidean norm per row
  std::vector<double> unit_data_;  // optional normalized copy, double so both
                                   // query routes agree to ~1e-15
};

struct EmbeddingLoadReport {
  std::size_t duplicate_words = 0;          // later occurrences skipped
  std::vector<std::string> zero_norm_words; // loadable but excluded from queries
};

/// GloVe text format: one "word v1 ... vd" line per word, dimension inferred
/// from the first line. Duplicate words keep the first occurrence.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               EmbeddingLoadReport* report = nullptr);

struct Neighbor {
  std::string word;
  double similarity;
  bool operator==(const Neighbor&) const = default;
};

/// dot(u,v) / (|u||v|), accumulated in double. Throws on dimension mismatch
/// or a zero-norm argument.
double cosine_similarity(std::span<const float> u, std::span<const float> v);

/// Up to k nearest rows by cosine similarity, excluding the query word and
/// zero-norm rows, descending similarity, ties broken by vocabulary order.
/// Throws Error for an out-of-vocabulary query.
std::vector<Neighbor> nearest_neighbors(const EmbeddingTable& t, std::string_view word,
                                        std::size_t k, double min_similarity);

// ---- binary cache -------------------------------------------------------
// Layout (little-endian): magic "SARCEMB1", u32 dim, u64 count, u64 source
// checksum, then per word u32 length + bytes, then count*dim float32 rows.

std::uint64_t file_checksum(const std::filesystem::path& path);
void save_embedding_cache(const EmbeddingTable& t, const std::filesystem::path& path,
                          std::uint64_t source_checksum);
/// nullopt when missing, malformed, or recorded for a different source file.
std::optional<EmbeddingTable> load_embedding_cache(const std::filesystem::path& path,
                                                   std::uint64_t expected_checksum);
/// Loads via the cache when it is valid for the source, else parses the text
/// file and refreshes the cache.
EmbeddingTable load_embeddings_cached(const std::filesystem::path& source,
                                      const std::filesystem::path& cache,
                                      EmbeddingLoadReport* report = nullptr);

}  // namespace sarcaug

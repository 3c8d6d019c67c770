#include "sarcaug/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>

#include "sarcaug/errors.hpp"
#include "sarcaug/rng.hpp"
#include "warn.hpp"

namespace sarcaug {

void EmbeddingTable::append_row(std::string word, const std::vector<float>& values) {
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
}

void EmbeddingTable::finalize_norms() {
  norms_.resize(size());
  for (std::size_t r = 0; r < size(); ++r) {
    double acc = 0.0;
    for (const float v : row(r)) acc += static_cast<double>(v) * v;
    norms_[r] = std::sqrt(acc);
  }
}

EmbeddingTable EmbeddingTable::from_rows(
    int dim, const std::vector<std::pair<std::string, std::vector<float>>>& rows) {
  if (dim < 1) throw ConfigError("embedding dimension must be >= 1");
  EmbeddingTable t;
  t.dim_ = dim;
  for (const auto& [word, values] : rows) {
    if (static_cast<int>(values.size()) != dim)
      throw Error("row '" + word + "' has dimension " + std::to_string(values.size()) +
                  ", expected " + std::to_string(dim));
    if (t.index_.count(word)) continue;
    t.append_row(word, values);
  }
  t.finalize_norms();
  return t;
}

bool EmbeddingTable::contains(std::string_view w) const {
  return index_.find(std::string(w)) != index_.end();
}

std::optional<std::size_t> EmbeddingTable::row_of(std::string_view w) const {
  auto it = index_.find(std::string(w));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::span<const float>> EmbeddingTable::lookup(std::string_view w) const {
  auto r = row_of(w);
  if (!r) return std::nullopt;
  return row(*r);
}

void EmbeddingTable::precompute_unit_rows() {
  unit_data_.assign(data_.begin(), data_.end());
  for (std::size_t r = 0; r < size(); ++r) {
    const double n = norms_[r];
    if (n == 0.0) continue;
    double* p = unit_data_.data() + r * static_cast<std::size_t>(dim_);
    for (int j = 0; j < dim_; ++j) p[j] /= n;
  }
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               EmbeddingLoadReport* report) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings '" + path.string() + "'");
  const std::string file = path.string();

  EmbeddingTable t;
  std::string line;
  std::size_t lineno = 0;
  std::vector<float> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto sep = line.find(' ');
    if (sep == std::string::npos || sep == 0)
      throw ParseError(file, lineno, "expected 'word v1 v2 ...'");
    std::string word = line.substr(0, sep);

    values.clear();
    const char* p = line.data() + sep + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      float v = 0.0f;
      const auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc())
        throw ParseError(file, lineno, "unparsable value near '" +
                                           std::string(p, std::min<std::size_t>(
                                                              8, end - p)) +
                                           "'");
      values.push_back(v);
      p = next;
    }
    if (values.empty()) throw ParseError(file, lineno, "no vector components");

    if (t.dim_ == 0) {
      t.dim_ = static_cast<int>(values.size());
    } else if (static_cast<int>(values.size()) != t.dim_) {
      throw ParseError(file, lineno,
                       "dimension " + std::to_string(values.size()) +
                           " does not match first line's " + std::to_string(t.dim_));
    }
    if (t.index_.count(word)) {
      if (report) ++report->duplicate_words;
      detail::warn(file + ":" + std::to_string(lineno) + ": duplicate word '" + word +
                   "', keeping first occurrence");
      continue;
    }
    t.append_row(std::move(word), values);
  }
  if (t.size() == 0) throw ParseError(file, lineno, "empty embedding file");
  t.finalize_norms();
  if (report) {
    for (std::size_t r = 0; r < t.size(); ++r)
      if (t.norm(r) == 0.0) report->zero_norm_words.push_back(t.word(r));
  }
  return t;
}

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size())
    throw Error("cosine_similarity: dimension mismatch (" + std::to_string(u.size()) +
                " vs " + std::to_string(v.size()) + ")");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<double>(u[i]) * v[i];
    nu += static_cast<double>(u[i]) * u[i];
    nv += static_cast<double>(v[i]) * v[i];
  }
  if (nu == 0.0 || nv == 0.0)
    throw Error("cosine_similarity: zero-norm vector");
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingTable& t, std::string_view word,
                                        std::size_t k, double min_similarity) {
  const auto query = t.row_of(word);
  if (!query) throw Error("nearest_neighbors: '" + std::string(word) + "' not in vocabulary");
  if (k == 0) return {};
  const double qnorm = t.norm(*query);
  if (qnorm == 0.0) return {};

  // Bounded selection: keep the k best (similarity desc, row asc) seen so far.
  // worst() is the current cutoff, so most rows are rejected on one compare.
  struct Cand {
    double sim;
    std::size_t row;
    bool better_than(const Cand& o) const {
      if (sim != o.sim) return sim > o.sim;
      return row < o.row;
    }
  };
  std::vector<Cand> heap;  // max: the WORST kept candidate at front
  auto heap_cmp = [](const Cand& a, const Cand& b) { return a.better_than(b); };
  heap.reserve(k + 1);

  const int dim = t.dim();
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (r == *query) continue;
    const double rnorm = t.norm(r);
    if (rnorm == 0.0) continue;
    double dot = 0.0;
    if (t.has_unit_rows()) {
      // prenormalized fast path; agrees with the plain route to ~1e-15
      const double* q = t.unit_rows_ptr(*query);
      const double* p = t.unit_rows_ptr(r);
      for (int j = 0; j < dim; ++j) dot += q[j] * p[j];
    } else {
      const auto qrow = t.row(*query);
      const auto rrow = t.row(r);
      for (int j = 0; j < dim; ++j)
        dot += static_cast<double>(qrow[j]) * rrow[j];
      dot /= qnorm * rnorm;
    }
    if (dot < min_similarity) continue;
    const Cand c{dot, r};
    if (heap.size() < k) {
      heap.push_back(c);
      std::push_heap(heap.begin(), heap.end(), heap_cmp);
    } else if (c.better_than(heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), heap_cmp);
      heap.back() = c;
      std::push_heap(heap.begin(), heap.end(), heap_cmp);
    }
  }

  std::sort(heap.begin(), heap.end(),
            [](const Cand& a, const Cand& b) { return a.better_than(b); });
  std::vector<Neighbor> out;
  out.reserve(heap.size());
  for (const auto& c : heap) out.push_back({t.word(c.row), c.sim});
  return out;
}

// ---- binary cache -------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'S', 'A', 'R', 'C', 'E', 'M', 'B', '1'};

template <typename T>
void write_le(std::ofstream& out, T v) {
  unsigned char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    b[i] = static_cast<unsigned char>(static_cast<std::uint64_t>(v) >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
bool read_le(std::ifstream& in, T& v) {
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof(T))) return false;
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    acc |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  v = static_cast<T>(acc);
  return true;
}

}  // namespace

std::uint64_t file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Fnv1a64 h;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    h.update(buf, static_cast<std::size_t>(in.gcount()));
  return h.value();
}

void save_embedding_cache(const EmbeddingTable& t, const std::filesystem::path& path,
                          std::uint64_t source_checksum) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write cache '" + path.string() + "'");
  out.write(kMagic, sizeof(kMagic));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.dim()));
  write_le<std::uint64_t>(out, t.size());
  write_le<std::uint64_t>(out, source_checksum);
  for (std::size_t r = 0; r < t.size(); ++r) {
    const auto& w = t.word(r);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(w.size()));
    out.write(w.data(), static_cast<std::streamsize>(w.size()));
  }
  for (std::size_t r = 0; r < t.size(); ++r)
    for (const float v : t.row(r)) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      write_le<std::uint32_t>(out, bits);
    }
  if (!out) throw IoError("write failed for cache '" + path.string() + "'");
}

std::optional<EmbeddingTable> load_embedding_cache(const std::filesystem::path& path,
                                                   std::uint64_t expected_checksum) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, 8) != 0)
    return std::nullopt;
  std::uint32_t dim = 0;
  std::uint64_t count = 0, checksum = 0;
  if (!read_le(in, dim) || !read_le(in, count) || !read_le(in, checksum))
    return std::nullopt;
  if (checksum != expected_checksum || dim == 0) return std::nullopt;

  EmbeddingTable t;
  t.dim_ = static_cast<int>(dim);
  t.words_.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) {
    std::uint32_t len = 0;
    if (!read_le(in, len)) return std::nullopt;
    std::string w(len, '\0');
    if (!in.read(w.data(), len)) return std::nullopt;
    t.index_.emplace(w, t.words_.size());
    t.words_.push_back(std::move(w));
  }
  t.data_.resize(count * dim);
  for (auto& v : t.data_) {
    std::uint32_t bits = 0;
    if (!read_le(in, bits)) return std::nullopt;
    std::memcpy(&v, &bits, sizeof bits);
  }
  t.finalize_norms();
  return t;
}

EmbeddingTable load_embeddings_cached(const std::filesystem::path& source,
                                      const std::filesystem::path& cache,
                                      EmbeddingLoadReport* report) {
  const std::uint64_t checksum = file_checksum(source);
  if (auto cached = load_embedding_cache(cache, checksum)) return std::move(*cached);
  EmbeddingTable t = load_embeddings(source, report);
  save_embedding_cache(t, cache, checksum);
  return t;
}

}  // namespace sarcaug

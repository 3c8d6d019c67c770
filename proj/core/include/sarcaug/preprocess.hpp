#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sarcaug/corpus.hpp"

namespace sarcaug {

using StopwordSet = std::set<std::string>;
using ContractionTable = std::map<std::string, std::string>;

// Built-in copies of the shipped word lists (data/stopwords.txt and
// data/contractions.csv); the files are authoritative and a test keeps the
// two in sync. Loading from file covers the override path.
const StopwordSet& default_stopwords();
const ContractionTable& default_contractions();
StopwordSet load_stopwords(const std::filesystem::path& path);
ContractionTable load_contractions(const std::filesystem::path& path);

enum class TrimUnit { tokens, chars };

struct PipelineConfig {
  int max_len_tokens = 100;
  TrimUnit trim_unit = TrimUnit::tokens;
  bool lowercase = true;
  bool strip_bracketed = true;
  bool strip_urls = true;
  bool strip_hashtags = true;
  bool strip_mentions = true;
  bool strip_emoji = true;
  bool strip_non_ascii = true;
  bool remove_stopwords = true;
  StopwordSet stopwords = default_stopwords();
  ContractionTable contractions = default_contractions();
};

/// Lexical normalization: collapse elongations (>=3 repeated letters -> 2),
/// expand contractions from the table (case-insensitive match, lowercase
/// replacement), collapse whitespace. Idempotent.
std::string normalize(std::string_view text);
std::string normalize(std::string_view text, const ContractionTable& contractions);

/// The flag-gated cleaning cascade, applied in a fixed order: lowercase,
/// bracketed spans, URLs, hashtags/mentions, emoji and non-ASCII codepoints,
/// stopword filtering (which separates and drops edge punctuation), then
/// whitespace collapse. Idempotent for any flag combination.
std::string clean(std::string_view text, const PipelineConfig& cfg);

/// First max_len_tokens whitespace tokens. Returns the input unchanged when
/// it is already short enough.
std::string trim(std::string_view text, int max_len_tokens);

/// Character-count variant (first max_len codepoints), selectable via
/// PipelineConfig::trim_unit.
std::string trim_chars(std::string_view text, int max_len);

std::vector<std::string> tokenize_ws(std::string_view text);

struct PreprocessReport {
  std::vector<std::string> dropped_ids;  // samples whose text cleaned to empty
};

/// normalize -> clean -> trim over every sample; empties are dropped and
/// reported. Output is the comparison form dedup() expects.
Dataset preprocess_dataset(const Dataset& d, const PipelineConfig& cfg,
                           PreprocessReport* report = nullptr);

}  // namespace sarcaug

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sarcaug {

enum class Label { negative, positive };  // positive == "sarcastic"
enum class Origin { original, augmented };
enum class Split { train, val, test };

std::string_view label_token(Label l);
std::string_view split_token(Split s);
std::optional<Label> parse_label(std::string_view token);
std::optional<Split> parse_split(std::string_view token);

/// One labeled text. Augmented samples point back at the original they
/// were generated from via parent_id.
struct Sample {
  std::string id;
  std::string text;
  Label label = Label::negative;
  Origin origin = Origin::original;
  std::string parent_id;  // empty iff origin == original

  bool operator==(const Sample&) const = default;
};

/// An ordered collection of samples plus their split assignment.
/// Immutable by convention: every operation returns a new Dataset.
struct Dataset {
  std::string name;
  std::vector<Sample> samples;
  std::map<std::string, Split> split_of;  // keyed by sample id

  bool operator==(const Dataset&) const = default;

  Split split(const std::string& id) const;
  const Sample* find(const std::string& id) const;
  std::size_t count_in_split(Split s) const;
  std::size_t count_label_in_split(Label l, Split s) const;
};

// Throws Error when an invariant is broken (duplicate ids, missing split
// entries, unresolvable parent ids, empty texts).
void validate_dataset(const Dataset& d);

struct DatasetStats {
  std::size_t n_train = 0, n_val = 0, n_test = 0;
  std::size_t pos_train = 0, pos_val = 0, pos_test = 0;
  double pct_positive = 0.0;  // over all splits, 2-decimal half-up
  double pct_positive_train = 0.0, pct_positive_val = 0.0, pct_positive_test = 0.0;

  std::size_t total() const { return n_train + n_val + n_test; }
};

enum class FileFormat { csv, jsonl };

// .csv -> csv, .jsonl/.json -> jsonl; anything else throws ConfigError.
FileFormat format_from_path(const std::filesystem::path& p);

/// Reads `text,label[,split]` CSV (RFC-4180 quoting, no embedded newlines) or
/// JSONL with keys text/label/split. Ids are "<name>:<record index>"; records
/// without a recognized split token land in train.
Dataset load_dataset(const std::filesystem::path& path, FileFormat format);
Dataset load_dataset(const std::filesystem::path& path, FileFormat format,
                     const std::string& name);

/// Writes the documented schema back out (text/label/split only; provenance
/// fields are not part of the interchange format).
void save_dataset(const Dataset& d, const std::filesystem::path& path, FileFormat format);

DatasetStats compute_stats(const Dataset& d);

/// Markdown row matching the stats table layout:
/// "| iSarcasm | 3,116 | 347 | 887 | 17.62% |"
std::string format_stats_row(std::string_view name, const DatasetStats& s);
std::string format_stats_header();

struct DroppedDuplicate {
  enum class Reason { within, across };
  std::string dataset;
  std::string id;
  std::string kept_id;  // id of the earlier sample that owns the text
  Reason reason = Reason::within;
};

struct DedupReport {
  std::vector<DroppedDuplicate> dropped;
};

/// Drops exact duplicate texts, first occurrence wins; across datasets the
/// earlier dataset in list order keeps the text. Texts are expected to be in
/// their post-preprocessing comparison form already.
std::vector<Dataset> dedup(const std::vector<Dataset>& datasets,
                           DedupReport* report = nullptr);

/// val -> train, test -> val. Sample set is unchanged.
Dataset merge_train_val(const Dataset& d);

/// Moves round-half-up(fraction * n_train) train samples to val, chosen by a
/// seeded shuffle. fraction must lie in (0,1); moving zero samples warns on
/// stderr but is not an error.
Dataset split_random(const Dataset& d, double fraction, std::uint64_t seed);

// Stable content hash over (name, ids, texts, labels, splits); feeds config
// fingerprints.
std::uint64_t dataset_checksum(const Dataset& d);

}  // namespace sarcaug

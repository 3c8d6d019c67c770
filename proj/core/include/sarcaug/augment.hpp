#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sarcaug/corpus.hpp"
#include "sarcaug/embeddings.hpp"
#include "sarcaug/preprocess.hpp"
#include "sarcaug/rng.hpp"

namespace sarcaug {

struct AugmentPolicy {
  Label target_label = Label::positive;
  double increase_pct = 20.0;   // class growth in percent, > 0
  int words_per_sentence = 1;   // max replacements per generated sentence
  int k_candidates = 5;         // neighbor pool size; k=1 reproduces top-1
  double min_similarity = 0.5;
  std::uint64_t seed = 0;
  int max_attempts_per_sample = 10;
  StopwordSet stopwords = default_stopwords();
};

void validate_policy(const AugmentPolicy& p);

struct AugmentReport {
  std::size_t requested = 0;
  std::size_t generated = 0;
  std::size_t rejected_duplicates = 0;
  std::size_t exhausted_sources = 0;  // sources that never produced an accepted sample
  std::size_t attempts = 0;

  std::string to_json() const;
};

/// Indices of tokens that are replaceable: in-vocabulary, alphabetic, and not
/// stopwords. Neighbor availability is checked later, at replacement time.
std::vector<std::size_t> eligible_words(const std::vector<std::string>& tokens,
                                        const EmbeddingTable& t,
                                        const StopwordSet& stopwords);

/// One stochastic replacement pass: picks up to words_per_sentence eligible
/// positions at random, substitutes each with a uniform draw from its top-k
/// neighbors above min_similarity. nullopt when no picked position admits a
/// neighbor. The result always differs from the input in at least one token.
std::optional<std::string> augment_sentence(std::string_view text, const EmbeddingTable& t,
                                            const AugmentPolicy& p, SplitMix64& rng);

/// Grows the target class in the train split by round-half-up(increase_pct%)
/// new samples. Sources rotate round-robin over a seeded permutation; texts
/// that duplicate any existing or already-accepted train text are rejected.
/// Generated samples carry origin=augmented, the source's id as parent_id,
/// and ids "<parent_id>#aug<attempt>". Val/test splits are untouched.
std::pair<Dataset, AugmentReport> augment_class(const Dataset& d, const EmbeddingTable& t,
                                                const AugmentPolicy& p);

}  // namespace sarcaug

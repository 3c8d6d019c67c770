#include "sarcaug/augment.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "sarcaug/errors.hpp"
#include "sarcaug/numeric.hpp"

namespace sarcaug {

void validate_policy(const AugmentPolicy& p) {
  if (!(p.increase_pct > 0.0)) throw ConfigError("increase_pct must be > 0");
  if (p.words_per_sentence < 1) throw ConfigError("words_per_sentence must be >= 1");
  if (p.k_candidates < 1) throw ConfigError("k_candidates must be >= 1");
  if (p.max_attempts_per_sample < 1)
    throw ConfigError("max_attempts_per_sample must be >= 1");
}

std::string AugmentReport::to_json() const {
  nlohmann::json j;
  j["requested"] = requested;
  j["generated"] = generated;
  j["rejected_duplicates"] = rejected_duplicates;
  j["exhausted_sources"] = exhausted_sources;
  j["attempts"] = attempts;
  return j.dump();
}

namespace {

bool all_ascii_alpha(const std::string& s) {
  if (s.empty()) return false;
  for (unsigned char c : s)
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) return false;
  return true;
}

std::string ascii_lower_copy(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace

std::vector<std::size_t> eligible_words(const std::vector<std::string>& tokens,
                                        const EmbeddingTable& t,
                                        const StopwordSet& stopwords) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (!all_ascii_alpha(tok)) continue;
    if (stopwords.count(ascii_lower_copy(tok))) continue;
    if (!t.contains(tok)) continue;
    out.push_back(i);
  }
  return out;
}

std::optional<std::string> augment_sentence(std::string_view text, const EmbeddingTable& t,
                                            const AugmentPolicy& p, SplitMix64& rng) {
  std::vector<std::string> tokens = tokenize_ws(text);
  std::vector<std::size_t> eligible = eligible_words(tokens, t, p.stopwords);
  if (eligible.empty()) return std::nullopt;

  // partial Fisher-Yates: the first n_pick entries are a uniform draw
  // without replacement
  const std::size_t n_pick =
      std::min<std::size_t>(static_cast<std::size_t>(p.words_per_sentence),
                            eligible.size());
  for (std::size_t i = 0; i < n_pick; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }

  std::size_t replaced = 0;
  for (std::size_t i = 0; i < n_pick; ++i) {
    const std::size_t pos = eligible[i];
    const auto neighbors = nearest_neighbors(
        t, tokens[pos], static_cast<std::size_t>(p.k_candidates), p.min_similarity);
    if (neighbors.empty()) continue;
    const auto& pick = neighbors[rng.below(neighbors.size())];
    tokens[pos] = pick.word;
    ++replaced;
  }
  if (replaced == 0) return std::nullopt;

  std::string out;
  for (const auto& tok : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

std::pair<Dataset, AugmentReport> augment_class(const Dataset& d, const EmbeddingTable& t,
                                                const AugmentPolicy& p) {
  validate_policy(p);

  std::vector<const Sample*> sources;
  std::unordered_set<std::string> train_texts;
  for (const auto& s : d.samples) {
    if (d.split(s.id) != Split::train) continue;
    train_texts.insert(s.text);
    if (s.label == p.target_label) sources.push_back(&s);
  }
  if (sources.empty())
    throw ConfigError("augment_class: no '" +
                      std::string(label_token(p.target_label)) +
                      "' samples in the train split");

  AugmentReport report;
  report.requested = static_cast<std::size_t>(
      round_half_up(p.increase_pct / 100.0 * static_cast<double>(sources.size())));

  std::vector<std::size_t> order(sources.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  SplitMix64 perm_rng(derive_seed(p.seed, std::string_view("augment-perm")));
  deterministic_shuffle(order, perm_rng);

  Dataset out = d;
  const auto max_attempts = static_cast<std::size_t>(p.max_attempts_per_sample);
  std::vector<std::size_t> attempts_used(sources.size(), 0);
  std::vector<std::size_t> accepted_from(sources.size(), 0);
  std::vector<bool> done(sources.size(), false);

  // Round-robin over the seeded permutation. Each attempt's stream depends
  // only on (policy seed, source id, attempt index), so the generated text
  // for a given slot never depends on scheduling.
  std::size_t live = sources.size();
  while (report.generated < report.requested && live > 0) {
    for (const std::size_t idx : order) {
      if (report.generated >= report.requested) break;
      if (done[idx]) continue;
      const Sample& src = *sources[idx];
      const std::size_t attempt = attempts_used[idx]++;
      ++report.attempts;

      SplitMix64 rng(derive_seed(p.seed, src.id, static_cast<std::uint64_t>(attempt)));
      auto candidate = augment_sentence(src.text, t, p, rng);

      bool retire = attempts_used[idx] >= max_attempts;
      if (candidate && !train_texts.count(*candidate)) {
        train_texts.insert(*candidate);
        Sample ns;
        ns.id = src.id + "#aug" + std::to_string(attempt);
        ns.text = std::move(*candidate);
        ns.label = p.target_label;
        ns.origin = Origin::augmented;
        ns.parent_id = src.id;
        out.split_of[ns.id] = Split::train;
        out.samples.push_back(std::move(ns));
        ++report.generated;
        ++accepted_from[idx];
      } else {
        if (candidate) ++report.rejected_duplicates;
        // a source with no eligible word can never succeed; retire it now
        else if (attempt == 0 &&
                 eligible_words(tokenize_ws(src.text), t, p.stopwords).empty())
          retire = true;
      }
      if (retire && !done[idx]) {
        done[idx] = true;
        --live;
      }
    }
  }

  for (std::size_t i = 0; i < sources.size(); ++i)
    if (done[i] && accepted_from[i] == 0) ++report.exhausted_sources;
  return {std::move(out), report};
}

}  // namespace sarcaug

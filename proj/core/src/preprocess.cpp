#include "sarcaug/preprocess.hpp"

#include <cctype>
#include <regex>
#include <sstream>

#include "sarcaug/errors.hpp"

namespace sarcaug {

namespace {

bool ascii_space(unsigned char c) { return std::isspace(c) != 0; }
bool ascii_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }
bool ascii_alnum(unsigned char c) { return c < 0x80 && std::isalnum(c) != 0; }
bool ascii_alpha(unsigned char c) { return c < 0x80 && std::isalpha(c) != 0; }
char ascii_lower(unsigned char c) {
  return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
}

std::string lower_copy(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(ascii_lower(c));
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (t.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

// Runs of >=3 of the same letter collapse to exactly two ("sooooo" -> "soo").
// Case-insensitive run detection, original case kept.
std::string collapse_elongation(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t run = 0;
  char run_letter = 0;
  for (unsigned char c : s) {
    if (ascii_alpha(c) && ascii_lower(c) == run_letter) {
      ++run;
      if (run > 2) continue;
    } else {
      run_letter = ascii_alpha(c) ? ascii_lower(c) : 0;
      run = 1;
    }
    out.push_back(static_cast<char>(c));
  }
  return out;
}

// Lowercased core with curly apostrophes (U+2019) mapped to ASCII, the form
// the contraction table is keyed by.
std::string contraction_key(std::string_view core) {
  std::string key;
  key.reserve(core.size());
  for (std::size_t i = 0; i < core.size();) {
    if (i + 2 < core.size() && static_cast<unsigned char>(core[i]) == 0xE2 &&
        static_cast<unsigned char>(core[i + 1]) == 0x80 &&
        static_cast<unsigned char>(core[i + 2]) == 0x99) {
      key.push_back('\'');
      i += 3;
      continue;
    }
    key.push_back(ascii_lower(static_cast<unsigned char>(core[i])));
    ++i;
  }
  return key;
}

// Expansion happens on the alphanumeric core of the token so that edge
// punctuation ("can't!") cannot hide a match; otherwise a later cleaning pass
// would expose the bare contraction and break pipeline idempotence.
std::string expand_token(const std::string& token, const ContractionTable& table) {
  std::size_t first = token.size(), last = 0;
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (ascii_alnum(static_cast<unsigned char>(token[i]))) {
      if (first == token.size()) first = i;
      last = i;
    }
  }
  if (first == token.size()) return token;  // no alphanumeric core
  const std::string core = token.substr(first, last - first + 1);
  auto it = table.find(contraction_key(core));
  if (it == table.end()) return token;
  return token.substr(0, first) + it->second + token.substr(last + 1);
}

// Innermost-first removal of [...] and (...) spans, iterated to a fixpoint.
// Unmatched brackets are left in place.
std::string remove_bracket_spans(std::string s) {
  for (std::size_t i = 0; i < s.size();) {
    const char c = s[i];
    if (c != ')' && c != ']') {
      ++i;
      continue;
    }
    const char opener = c == ')' ? '(' : '[';
    const auto open = s.rfind(opener, i);
    bool crossed = false;
    if (open != std::string::npos) {
      // a different-kind bracket between them means they do not pair up
      for (std::size_t j = open + 1; j < i && !crossed; ++j)
        if (s[j] == '(' || s[j] == '[') crossed = true;
    }
    if (open == std::string::npos || crossed) {
      ++i;
      continue;
    }
    s.erase(open, i - open + 1);
    i = open;
  }
  return s;
}

bool is_url_token(const std::string& lower) {
  if (lower.find("http://") != std::string::npos) return true;
  if (lower.find("https://") != std::string::npos) return true;
  if (lower.rfind("www.", 0) == 0) return true;
  // shortener-style: domain labels, a 2+ letter TLD, then a path
  static const std::regex shortener(R"(^[a-z0-9-]+(\.[a-z0-9-]+)*\.[a-z]{2,}/[^\s]*$)");
  return std::regex_match(lower, shortener);
}

bool is_emoji(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) ||  // pictographs, emoticons, transport
         (cp >= 0x2600 && cp <= 0x27BF) ||    // misc symbols, dingbats
         (cp >= 0x2B00 && cp <= 0x2BFF) ||    // stars, arrows
         (cp >= 0xFE00 && cp <= 0xFE0F) ||    // variation selectors
         cp == 0x200D || cp == 0x20E3;        // ZWJ, keycap
}

// Decodes UTF-8 and drops codepoints according to the flags. Invalid byte
// sequences are dropped unconditionally once either filter is active.
std::string filter_codepoints(std::string_view s, bool strip_non_ascii,
                              bool strip_emoji) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
      out.push_back(static_cast<char>(b0));
      ++i;
      continue;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
    bool valid = len > 0 && i + len <= s.size();
    for (std::size_t j = 1; valid && j < len; ++j) {
      const auto bj = static_cast<unsigned char>(s[i + j]);
      if ((bj & 0xC0) != 0x80) valid = false;
      else cp = (cp << 6) | (bj & 0x3F);
    }
    if (!valid) {
      ++i;  // skip the malformed byte
      continue;
    }
    if (!strip_non_ascii && !(strip_emoji && is_emoji(cp)))
      out.append(s.substr(i, len));
    i += len;
  }
  return out;
}

// Tokenizes with edge punctuation separated off, then drops punctuation
// tokens and stopwords. Internal punctuation (hyphens, apostrophes) survives.
std::string drop_stopwords(std::string_view s, const StopwordSet& stopwords) {
  std::vector<std::string> kept;
  for (auto& token : tokenize_ws(s)) {
    std::size_t begin = 0, end = token.size();
    while (begin < end && ascii_punct(static_cast<unsigned char>(token[begin]))) ++begin;
    while (end > begin && ascii_punct(static_cast<unsigned char>(token[end - 1]))) --end;
    if (begin == end) continue;
    std::string core = token.substr(begin, end - begin);
    if (stopwords.count(lower_copy(core))) continue;
    kept.push_back(std::move(core));
  }
  return join_tokens(kept);
}

}  // namespace

std::vector<std::string> tokenize_ws(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string normalize(std::string_view text, const ContractionTable& contractions) {
  std::vector<std::string> tokens = tokenize_ws(collapse_elongation(text));
  for (auto& t : tokens) t = expand_token(t, contractions);
  return join_tokens(tokens);
}

std::string normalize(std::string_view text) {
  return normalize(text, default_contractions());
}

std::string clean(std::string_view text, const PipelineConfig& cfg) {
  std::string s(text);
  if (cfg.lowercase) s = lower_copy(s);
  if (cfg.strip_bracketed) s = remove_bracket_spans(std::move(s));

  if (cfg.strip_urls || cfg.strip_hashtags || cfg.strip_mentions) {
    std::vector<std::string> kept;
    for (auto& token : tokenize_ws(s)) {
      if (cfg.strip_urls && is_url_token(lower_copy(token))) continue;
      if (cfg.strip_hashtags && token[0] == '#') continue;
      if (cfg.strip_mentions && token[0] == '@') continue;
      kept.push_back(std::move(token));
    }
    s = join_tokens(kept);
  }

  if (cfg.strip_non_ascii || cfg.strip_emoji)
    s = filter_codepoints(s, cfg.strip_non_ascii, cfg.strip_emoji);
  if (cfg.remove_stopwords) s = drop_stopwords(s, cfg.stopwords);
  return join_tokens(tokenize_ws(s));
}

std::string trim(std::string_view text, int max_len_tokens) {
  if (max_len_tokens < 1) throw ConfigError("max_len_tokens must be >= 1");
  auto tokens = tokenize_ws(text);
  if (tokens.size() <= static_cast<std::size_t>(max_len_tokens))
    return std::string(text);
  tokens.resize(static_cast<std::size_t>(max_len_tokens));
  return join_tokens(tokens);
}

std::string trim_chars(std::string_view text, int max_len) {
  if (max_len < 1) throw ConfigError("max_len must be >= 1");
  std::size_t count = 0, i = 0;
  while (i < text.size() && count < static_cast<std::size_t>(max_len)) {
    // advance one UTF-8 codepoint
    const auto b = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if ((b & 0xE0) == 0xC0) len = 2;
    else if ((b & 0xF0) == 0xE0) len = 3;
    else if ((b & 0xF8) == 0xF0) len = 4;
    i = std::min(text.size(), i + len);
    ++count;
  }
  if (i >= text.size()) return std::string(text);
  std::string out(text.substr(0, i));
  while (!out.empty() && ascii_space(static_cast<unsigned char>(out.back())))
    out.pop_back();
  return out;
}

Dataset preprocess_dataset(const Dataset& d, const PipelineConfig& cfg,
                           PreprocessReport* report) {
  if (cfg.max_len_tokens < 1) throw ConfigError("max_len_tokens must be >= 1");
  Dataset out;
  out.name = d.name;
  for (const auto& s : d.samples) {
    std::string text = clean(normalize(s.text, cfg.contractions), cfg);
    text = cfg.trim_unit == TrimUnit::tokens ? trim(text, cfg.max_len_tokens)
                                             : trim_chars(text, cfg.max_len_tokens);
    if (text.empty()) {
      if (report) report->dropped_ids.push_back(s.id);
      continue;
    }
    Sample ns = s;
    ns.text = std::move(text);
    out.split_of[ns.id] = d.split(ns.id);
    out.samples.push_back(std::move(ns));
  }
  return out;
}

}  // namespace sarcaug

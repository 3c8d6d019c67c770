#include "sarcaug/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "sarcaug/errors.hpp"
#include "sarcaug/numeric.hpp"
#include "sarcaug/rng.hpp"
#include "warn.hpp"

namespace sarcaug {

using json = nlohmann::json;

std::string_view label_token(Label l) {
  return l == Label::positive ? "sarcastic" : "not_sarcastic";
}

std::string_view split_token(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    default: return "test";
  }
}

std::optional<Label> parse_label(std::string_view token) {
  if (token == "sarcastic") return Label::positive;
  if (token == "not_sarcastic") return Label::negative;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view token) {
  if (token == "train") return Split::train;
  if (token == "val") return Split::val;
  if (token == "test") return Split::test;
  return std::nullopt;
}

Split Dataset::split(const std::string& id) const {
  auto it = split_of.find(id);
  if (it == split_of.end()) throw Error("no split assignment for sample id '" + id + "'");
  return it->second;
}

const Sample* Dataset::find(const std::string& id) const {
  for (const auto& s : samples)
    if (s.id == id) return &s;
  return nullptr;
}

std::size_t Dataset::count_in_split(Split sp) const {
  std::size_t n = 0;
  for (const auto& s : samples)
    if (split(s.id) == sp) ++n;
  return n;
}

std::size_t Dataset::count_label_in_split(Label l, Split sp) const {
  std::size_t n = 0;
  for (const auto& s : samples)
    if (s.label == l && split(s.id) == sp) ++n;
  return n;
}

void validate_dataset(const Dataset& d) {
  std::unordered_set<std::string> seen;
  std::unordered_set<std::string> ids;
  for (const auto& s : d.samples) ids.insert(s.id);
  for (const auto& s : d.samples) {
    if (!seen.insert(s.id).second)
      throw Error("dataset '" + d.name + "': duplicate sample id '" + s.id + "'");
    if (s.text.empty())
      throw Error("dataset '" + d.name + "': empty text for sample '" + s.id + "'");
    if (s.origin == Origin::augmented) {
      if (s.parent_id.empty())
        throw Error("dataset '" + d.name + "': augmented sample '" + s.id +
                    "' has no parent_id");
      if (!ids.count(s.parent_id))
        throw Error("dataset '" + d.name + "': parent_id '" + s.parent_id +
                    "' of sample '" + s.id + "' does not resolve");
    } else if (!s.parent_id.empty()) {
      throw Error("dataset '" + d.name + "': original sample '" + s.id +
                  "' carries a parent_id");
    }
    if (!d.split_of.count(s.id))
      throw Error("dataset '" + d.name + "': sample '" + s.id + "' missing from split map");
  }
  if (d.split_of.size() != d.samples.size())
    throw Error("dataset '" + d.name + "': split map has entries for unknown ids");
}

FileFormat format_from_path(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".csv") return FileFormat::csv;
  if (ext == ".jsonl" || ext == ".json") return FileFormat::jsonl;
  throw ConfigError("cannot infer dataset format from extension '" + ext +
                    "' (expected .csv or .jsonl)");
}

namespace {

// One CSV record; RFC-4180 quoting, but fields may not span lines.
std::vector<std::string> parse_csv_line(const std::string& line, const std::string& file,
                                        std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  std::size_t i = 0;
  const std::size_t n = line.size();
  bool in_field_quotes = false;  // the current field started with a quote
  while (i <= n) {
    if (i == n) {
      if (quoted) throw ParseError(file, lineno, "unterminated quoted field");
      fields.push_back(cur);
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < n && line[i + 1] == '"') {
          cur.push_back('"');
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      cur.push_back(c);
      ++i;
      continue;
    }
    if (c == '"' && cur.empty() && !in_field_quotes) {
      quoted = true;
      in_field_quotes = true;
      ++i;
      continue;
    }
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
      in_field_quotes = false;
      ++i;
      continue;
    }
    cur.push_back(c);
    ++i;
  }
  return fields;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

Split split_or_default(const std::string& token, const std::string& file,
                       std::size_t lineno) {
  if (token.empty()) return Split::train;
  if (auto s = parse_split(token)) return *s;
  detail::warn(file + ":" + std::to_string(lineno) + ": unknown split token '" + token +
               "', defaulting to train");
  return Split::train;
}

void append_record(Dataset& d, std::string text, const std::string& label_tok,
                   const std::string& split_tok, const std::string& file,
                   std::size_t lineno) {
  const auto label = parse_label(label_tok);
  if (!label)
    throw ParseError(file, lineno, "unknown label token '" + label_tok + "'");
  if (text.empty()) throw ParseError(file, lineno, "empty text field");
  Sample s;
  s.id = d.name + ":" + std::to_string(d.samples.size());
  s.text = std::move(text);
  s.label = *label;
  d.split_of[s.id] = split_or_default(split_tok, file, lineno);
  d.samples.push_back(std::move(s));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::string file = path.string();
  Dataset d;
  d.name = name;

  std::string line;
  if (!std::getline(in, line)) throw ParseError(file, 1, "missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = parse_csv_line(line, file, 1);
  int text_col = -1, label_col = -1, split_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "text") text_col = static_cast<int>(c);
    else if (header[c] == "label") label_col = static_cast<int>(c);
    else if (header[c] == "split") split_col = static_cast<int>(c);
  }
  if (text_col < 0 || label_col < 0)
    throw ParseError(file, 1, "header must name 'text' and 'label' columns");

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = parse_csv_line(line, file, lineno);
    const auto need = static_cast<std::size_t>(std::max(text_col, label_col)) + 1;
    if (fields.size() < need)
      throw ParseError(file, lineno, "record has " + std::to_string(fields.size()) +
                                         " fields, expected at least " +
                                         std::to_string(need));
    const std::string split_tok =
        (split_col >= 0 && static_cast<std::size_t>(split_col) < fields.size())
            ? fields[split_col]
            : "";
    append_record(d, std::move(fields[text_col]), fields[label_col], split_tok, file,
                  lineno);
  }
  return d;
}

Dataset load_jsonl(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::string file = path.string();
  Dataset d;
  d.name = name;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(file, lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object() || !rec.contains("text") || !rec.contains("label"))
      throw ParseError(file, lineno, "record must be an object with 'text' and 'label'");
    if (!rec["text"].is_string() || !rec["label"].is_string())
      throw ParseError(file, lineno, "'text' and 'label' must be strings");
    std::string split_tok;
    if (rec.contains("split")) {
      if (!rec["split"].is_string())
        throw ParseError(file, lineno, "'split' must be a string");
      split_tok = rec["split"].get<std::string>();
    }
    append_record(d, rec["text"].get<std::string>(), rec["label"].get<std::string>(),
                  split_tok, file, lineno);
  }
  return d;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path, FileFormat format,
                     const std::string& name) {
  Dataset d =
      format == FileFormat::csv ? load_csv(path, name) : load_jsonl(path, name);
  validate_dataset(d);
  return d;
}

Dataset load_dataset(const std::filesystem::path& path, FileFormat format) {
  return load_dataset(path, format, path.stem().string());
}

void save_dataset(const Dataset& d, const std::filesystem::path& path,
                  FileFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  if (format == FileFormat::csv) {
    out << "text,label,split\n";
    for (const auto& s : d.samples)
      out << csv_escape(s.text) << ',' << label_token(s.label) << ','
          << split_token(d.split(s.id)) << '\n';
  } else {
    for (const auto& s : d.samples) {
      json rec;
      rec["text"] = s.text;
      rec["label"] = std::string(label_token(s.label));
      rec["split"] = std::string(split_token(d.split(s.id)));
      out << rec.dump() << '\n';
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

DatasetStats compute_stats(const Dataset& d) {
  DatasetStats st;
  for (const auto& s : d.samples) {
    const Split sp = d.split(s.id);
    const bool pos = s.label == Label::positive;
    switch (sp) {
      case Split::train: ++st.n_train; st.pos_train += pos; break;
      case Split::val: ++st.n_val; st.pos_val += pos; break;
      case Split::test: ++st.n_test; st.pos_test += pos; break;
    }
  }
  auto pct = [](std::size_t pos, std::size_t n) {
    return n == 0 ? 0.0 : round_half_up(100.0 * static_cast<double>(pos) /
                                            static_cast<double>(n),
                                        2);
  };
  st.pct_positive = pct(st.pos_train + st.pos_val + st.pos_test, st.total());
  st.pct_positive_train = pct(st.pos_train, st.n_train);
  st.pct_positive_val = pct(st.pos_val, st.n_val);
  st.pct_positive_test = pct(st.pos_test, st.n_test);
  return st;
}

std::string format_stats_header() {
  return "| Dataset | Train | Val | Test | % Sarcasm |\n|---|---|---|---|---|";
}

std::string format_stats_row(std::string_view name, const DatasetStats& s) {
  std::ostringstream os;
  os << "| " << name << " | " << format_thousands(static_cast<long long>(s.n_train))
     << " | " << format_thousands(static_cast<long long>(s.n_val)) << " | "
     << format_thousands(static_cast<long long>(s.n_test)) << " | "
     << format_fixed(s.pct_positive, 2) << "% |";
  return os.str();
}

std::vector<Dataset> dedup(const std::vector<Dataset>& datasets, DedupReport* report) {
  // text -> (dataset list index, keeper id)
  std::unordered_map<std::string, std::pair<std::size_t, std::string>> owners;
  std::vector<Dataset> out;
  out.reserve(datasets.size());
  for (std::size_t di = 0; di < datasets.size(); ++di) {
    const Dataset& src = datasets[di];
    Dataset kept;
    kept.name = src.name;
    for (const auto& s : src.samples) {
      auto it = owners.find(s.text);
      if (it == owners.end()) {
        owners.emplace(s.text, std::make_pair(di, s.id));
        kept.split_of[s.id] = src.split(s.id);
        kept.samples.push_back(s);
      } else if (report) {
        report->dropped.push_back({src.name, s.id, it->second.second,
                                   it->second.first == di
                                       ? DroppedDuplicate::Reason::within
                                       : DroppedDuplicate::Reason::across});
      }
    }
    out.push_back(std::move(kept));
  }
  return out;
}

Dataset merge_train_val(const Dataset& d) {
  Dataset out = d;
  for (auto& [id, sp] : out.split_of) {
    if (sp == Split::val) sp = Split::train;
    else if (sp == Split::test) sp = Split::val;
  }
  return out;
}

Dataset split_random(const Dataset& d, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ConfigError("split fraction must lie in (0,1), got " +
                      std::to_string(fraction));
  std::vector<std::string> train_ids;
  for (const auto& s : d.samples)
    if (d.split(s.id) == Split::train) train_ids.push_back(s.id);
  if (train_ids.empty()) throw ConfigError("split_random: train split is empty");

  const auto n_move = static_cast<std::size_t>(
      round_half_up(fraction * static_cast<double>(train_ids.size())));
  if (n_move == 0)
    detail::warn("split_random: fraction " + std::to_string(fraction) + " of " +
                 std::to_string(train_ids.size()) + " train samples rounds to zero");

  SplitMix64 rng(seed);
  deterministic_shuffle(train_ids, rng);
  Dataset out = d;
  for (std::size_t i = 0; i < n_move; ++i) out.split_of[train_ids[i]] = Split::val;
  return out;
}

std::uint64_t dataset_checksum(const Dataset& d) {
  Fnv1a64 h;
  h.update(d.name);
  for (const auto& s : d.samples) {
    h.update(s.id);
    h.update(std::string_view("\x1f"));
    h.update(s.text);
    h.update(std::string_view("\x1f"));
    h.update(label_token(s.label));
    h.update(std::string_view("\x1f"));
    h.update(split_token(d.split(s.id)));
    h.update(std::string_view("\x1e"));
  }
  return h.value();
}

}  // namespace sarcaug

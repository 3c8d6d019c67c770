#include <fstream>
#include <sstream>

#include "sarcaug/errors.hpp"
#include "sarcaug/preprocess.hpp"

namespace sarcaug {

namespace {

constexpr const char kStopwordsRaw[] =
#include "stopwords.inc"
    ;
constexpr const char kContractionsRaw[] =
#include "contractions.inc"
    ;

StopwordSet parse_stopwords(std::istream& in, const std::string& origin) {
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    for (char c : line)
      if (c == ' ' || c == '\t')
        throw ParseError(origin + ": stopword entries must be single tokens: '" + line +
                         "'");
    set.insert(line);
  }
  return set;
}

ContractionTable parse_contractions(std::istream& in, const std::string& origin) {
  ContractionTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(origin, lineno, "expected 'contraction,expansion'");
    std::string key = line.substr(0, comma);
    std::string value = line.substr(comma + 1);
    if (lineno == 1 && key == "contraction") continue;  // header
    if (key.empty() || value.empty())
      throw ParseError(origin, lineno, "empty contraction or expansion");
    table[std::move(key)] = std::move(value);
  }
  return table;
}

}  // namespace

const StopwordSet& default_stopwords() {
  static const StopwordSet set = [] {
    std::istringstream in{std::string(kStopwordsRaw)};
    return parse_stopwords(in, "<built-in stopwords>");
  }();
  return set;
}

const ContractionTable& default_contractions() {
  static const ContractionTable table = [] {
    std::istringstream in{std::string(kContractionsRaw)};
    return parse_contractions(in, "<built-in contractions>");
  }();
  return table;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword list '" + path.string() + "'");
  return parse_stopwords(in, path.string());
}

ContractionTable load_contractions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open contraction table '" + path.string() + "'");
  return parse_contractions(in, path.string());
}

}  // namespace sarcaug

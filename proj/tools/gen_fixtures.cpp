// Regenerates the deterministic fixtures under data/fixtures/. The outputs
// are checked in; rerun this only when the recipes below change.
//
// mini_glove.txt geometry: two word clusters sit on orthogonal axes with
// per-word jitter small enough that every within-cluster cosine stays above
// 0.5 and every cross-cluster / filler-cluster cosine stays below it. That
// makes neighbor admissibility at the 0.5 floor a certainty, not a
// probability, which the augmentation accounting tests lean on.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sarcaug/corpus.hpp"
#include "sarcaug/rng.hpp"

namespace fs = std::filesystem;
using sarcaug::SplitMix64;

namespace {

const std::vector<std::string> kClusterA = {
    "amazing",   "brilliant", "fantastic",    "wonderful", "perfect",
    "lovely",    "great",     "terrific",     "superb",    "fabulous",
    "genius",    "awesome",   "delightful",   "splendid",  "magnificent",
    "marvelous", "glorious",  "stellar",      "sublime",   "exquisite",
    "charming",  "dazzling",  "stunning",     "breathtaking", "incredible",
    "epic",      "legendary", "golden",       "shiny",     "sparkling",
    "graceful",  "elegant",   "radiant",      "vibrant",   "cheerful",
    "joyful",    "blissful",  "serene",       "peaceful",  "dreamy"};

const std::vector<std::string> kClusterB = {
    "awful",    "terrible", "horrible",  "dreadful", "miserable",
    "rotten",   "nasty",    "ugly",      "gross",    "disgusting",
    "boring",   "tedious",  "dull",      "bland",    "stale",
    "broken",   "useless",  "worthless", "pathetic", "tragic",
    "gloomy",   "dismal",   "bleak",     "grim",     "sour",
    "bitter",   "freezing", "harsh",     "cruel",    "brutal",
    "savage",   "vicious",  "toxic",     "messy",    "chaotic",
    "clumsy",   "sloppy",   "lazy",      "rude",     "annoying"};

const std::vector<std::string> kFiller = {
    "table",  "chair",  "window", "garden", "river",  "mountain", "cloud",
    "paper",  "bottle", "engine", "circle", "rocket", "galaxy",   "pencil",
    "mirror", "carpet", "ladder", "tunnel", "anchor", "zerovec"};

constexpr int kDim = 10;

std::vector<double> cluster_vector(int axis, SplitMix64& rng) {
  std::vector<double> v(kDim, 0.0);
  v[axis] = 1.0;
  // jitter only in dims 2..9 so the two cluster axes stay exactly orthogonal
  for (int d = 2; d < kDim; ++d) v[d] = (rng.unit() * 2.0 - 1.0) * 0.15;
  return v;
}

std::vector<double> filler_vector(SplitMix64& rng) {
  std::vector<double> v(kDim, 0.0);
  for (int d = 2; d < kDim; ++d) v[d] = rng.unit() * 2.0 - 1.0;
  return v;
}

void write_glove(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  char buf[32];
  const auto emit = [&](const std::string& word, const std::vector<double>& v) {
    out << word;
    for (double x : v) {
      std::snprintf(buf, sizeof buf, " %.6f", x);
      out << buf;
    }
    out << "\n";
  };
  SplitMix64 a_rng(1001), b_rng(1002), f_rng(1003);
  for (const auto& w : kClusterA) emit(w, cluster_vector(0, a_rng));
  for (const auto& w : kClusterB) emit(w, cluster_vector(1, b_rng));
  for (const auto& w : kFiller)
    emit(w, w == "zerovec" ? std::vector<double>(kDim, 0.0) : filler_vector(f_rng));
}

void write_augment_corpus(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "text,label,split\n";
  SplitMix64 rng(2001);
  const auto pick = [&](const std::vector<std::string>& pool) {
    return pool[rng.below(pool.size())];
  };
  // 100 positive train rows; the serial token "s<i>" contains a digit, so it
  // is never replacement-eligible and keeps every generated text unique
  for (int i = 0; i < 100; ++i)
    out << "s" << i << " " << pick(kClusterA) << " " << pick(kClusterA) << " "
        << pick(kClusterA) << ",sarcastic,train\n";
  for (int i = 0; i < 200; ++i)
    out << "n" << i << " " << pick(kClusterB) << " " << pick(kClusterB) << " "
        << pick(kClusterB) << ",not_sarcastic,train\n";
  for (int i = 0; i < 30; ++i)
    out << "v" << i << " " << pick(i < 10 ? kClusterA : kClusterB) << " "
        << pick(i < 10 ? kClusterA : kClusterB) << ","
        << (i < 10 ? "sarcastic" : "not_sarcastic") << ",val\n";
  for (int i = 0; i < 30; ++i)
    out << "t" << i << " " << pick(i < 10 ? kClusterA : kClusterB) << " "
        << pick(i < 10 ? kClusterA : kClusterB) << ","
        << (i < 10 ? "sarcastic" : "not_sarcastic") << ",test\n";
}

// Noisy two-cluster corpus: positives lean on cluster-A words, negatives on
// cluster-B, with enough word-level mixing that the level-0 classifier under-
// recalls the minority class. Text lengths vary so the per-text feature means
// spread out instead of quantizing onto a few values. Probabilities were
// tuned so that growing the positive class 20% lifts mean F1 over 10 seeds
// with a clear margin.
void write_imbalanced_corpus(const fs::path& path, double p_own, double p_other,
                             int len_min, int len_max) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "text,label,split\n";
  SplitMix64 rng(3001);
  const auto pick = [&](const std::vector<std::string>& pool) {
    return pool[rng.below(pool.size())];
  };
  const auto draw_word = [&](bool positive) {
    const double u = rng.unit();
    const auto& own = positive ? kClusterA : kClusterB;
    const auto& other = positive ? kClusterB : kClusterA;
    if (u < p_own) return pick(own);
    if (u < p_own + p_other) return pick(other);
    return pick(kFiller);
  };
  for (int i = 0; i < 2000; ++i) {
    const char* split = i < 1600 ? "train" : (i < 1800 ? "val" : "test");
    const int base = i < 1600 ? 0 : (i < 1800 ? 1600 : 1800);
    const int span = i < 1600 ? 1600 : 200;
    const bool positive = (i - base) < span / 10;
    const int len =
        len_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(len_max - len_min + 1)));
    out << "x" << i;
    for (int w = 0; w < len; ++w) out << " " << draw_word(positive);
    out << "," << (positive ? "sarcastic" : "not_sarcastic") << "," << split << "\n";
  }
}

void write_tiny10(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "text,label,split\n";
  out << "amazing day at the office,sarcastic,train\n";
  out << "brilliant weather again,sarcastic,train\n";
  out << "river by the garden,not_sarcastic,train\n";
  out << "broken window in the tunnel,not_sarcastic,train\n";
  out << "paper bottle on the table,not_sarcastic,train\n";
  out << "cloud over the mountain,not_sarcastic,train\n";
  out << "lovely queue at the bank,sarcastic,val\n";
  out << "pencil and mirror,not_sarcastic,val\n";
  out << "fantastic traffic this morning,sarcastic,test\n";
  out << "carpet near the ladder,not_sarcastic,test\n";
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out_dir = "data/fixtures";
  double p_own = 0.70, p_other = 0.23;
  int len_min = 5, len_max = 14;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    const auto next = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << arg << " needs a value\n";
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--out")
      out_dir = next();
    else if (arg == "--p-own")
      p_own = std::stod(next());
    else if (arg == "--p-other")
      p_other = std::stod(next());
    else if (arg == "--len-min")
      len_min = std::stoi(next());
    else if (arg == "--len-max")
      len_max = std::stoi(next());
    else {
      std::cerr << "usage: gen_fixtures [--out DIR] [--p-own X] [--p-other X] "
                   "[--len-min N] [--len-max N]\n";
      return 2;
    }
  }
  fs::create_directories(out_dir);
  write_glove(out_dir / "mini_glove.txt");
  write_augment_corpus(out_dir / "augment_corpus.csv");
  write_imbalanced_corpus(out_dir / "imbalanced_corpus.csv", p_own, p_other, len_min,
                          len_max);
  write_tiny10(out_dir / "tiny10.csv");
  std::cout << "fixtures written to " << out_dir.string() << "\n";
  return 0;
}

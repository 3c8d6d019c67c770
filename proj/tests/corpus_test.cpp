#include "sarcaug/corpus.hpp"

#include <string>
#include <vector>

#include <doctest.h>

#include "sarcaug/errors.hpp"
#include "test_util.hpp"

using namespace sarcaug;
using testutil::TempDir;

namespace {

Dataset make(const std::string& name,
             const std::vector<std::tuple<std::string, Label, Split>>& rows) {
  Dataset d;
  d.name = name;
  for (const auto& [text, label, split] : rows) {
    Sample s;
    s.id = name + ":" + std::to_string(d.samples.size());
    s.text = text;
    s.label = label;
    d.split_of[s.id] = split;
    d.samples.push_back(std::move(s));
  }
  return d;
}

}  // namespace

TEST_CASE("csv loader maps columns by header name") {
  TempDir tmp;
  const auto p = tmp / "swapped.csv";
  // Extra column, label before text: the header decides, order does not.
  testutil::write_file(p,
                       "label,extra,text,split\n"
                       "sarcastic,x,oh sure great,train\n"
                       "not_sarcastic,y,plain statement,val\n");
  const auto d = load_dataset(p, FileFormat::csv);
  REQUIRE(d.samples.size() == 2);
  CHECK(d.name == "swapped");
  CHECK(d.samples[0].text == "oh sure great");
  CHECK(d.samples[0].label == Label::positive);
  CHECK(d.samples[0].id == "swapped:0");
  CHECK(d.split(d.samples[1].id) == Split::val);
}

TEST_CASE("csv loader handles rfc4180 quoting") {
  TempDir tmp;
  const auto p = tmp / "quoted.csv";
  testutil::write_file(p,
                       "text,label,split\n"
                       "\"hello, world\",sarcastic,train\n"
                       "\"she said \"\"hi\"\"\",not_sarcastic,test\n");
  const auto d = load_dataset(p, FileFormat::csv);
  REQUIRE(d.samples.size() == 2);
  CHECK(d.samples[0].text == "hello, world");
  CHECK(d.samples[1].text == "she said \"hi\"");
}

TEST_CASE("csv loader rejects bad records with line numbers") {
  TempDir tmp;

  SUBCASE("unknown label") {
    const auto p = tmp / "bad_label.csv";
    testutil::write_file(p, "text,label\nok,sarcastic\nboom,maybe\n");
    CHECK_THROWS_WITH_AS(load_dataset(p, FileFormat::csv),
                         doctest::Contains(":3:"), ParseError);
  }
  SUBCASE("empty text") {
    const auto p = tmp / "empty_text.csv";
    testutil::write_file(p, "text,label\n,sarcastic\n");
    CHECK_THROWS_AS(load_dataset(p, FileFormat::csv), ParseError);
  }
  SUBCASE("missing header column") {
    const auto p = tmp / "no_label.csv";
    testutil::write_file(p, "text,split\nok,train\n");
    CHECK_THROWS_AS(load_dataset(p, FileFormat::csv), ParseError);
  }
  SUBCASE("unterminated quote") {
    const auto p = tmp / "unterminated.csv";
    testutil::write_file(p, "text,label\n\"oops,sarcastic\n");
    CHECK_THROWS_AS(load_dataset(p, FileFormat::csv), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_dataset(tmp / "nope.csv", FileFormat::csv), IoError);
  }
}

TEST_CASE("records without a usable split land in train") {
  TempDir tmp;
  const auto p = tmp / "splits.csv";
  // No split column at all in one file; unknown token in the other.
  testutil::write_file(p, "text,label\njust text,sarcastic\n");
  const auto d1 = load_dataset(p, FileFormat::csv);
  CHECK(d1.split(d1.samples[0].id) == Split::train);

  const auto q = tmp / "odd_split.csv";
  testutil::write_file(q, "text,label,split\nsomething,sarcastic,dev\n");
  const auto d2 = load_dataset(q, FileFormat::csv);  // warns, does not throw
  CHECK(d2.split(d2.samples[0].id) == Split::train);
}

TEST_CASE("jsonl loader round-trips and reports bad lines") {
  TempDir tmp;
  const auto p = tmp / "data.jsonl";
  testutil::write_file(
      p,
      "{\"text\":\"first\",\"label\":\"sarcastic\",\"split\":\"train\"}\n"
      "{\"text\":\"second, \\\"quoted\\\"\",\"label\":\"not_sarcastic\",\"split\":\"test\"}\n");
  const auto d = load_dataset(p, FileFormat::jsonl);
  REQUIRE(d.samples.size() == 2);
  CHECK(d.samples[1].text == "second, \"quoted\"");
  CHECK(d.split(d.samples[1].id) == Split::test);

  const auto bad = tmp / "bad.jsonl";
  testutil::write_file(bad, "{\"text\":\"ok\",\"label\":\"sarcastic\"}\nnot json at all\n");
  CHECK_THROWS_WITH_AS(load_dataset(bad, FileFormat::jsonl),
                       doctest::Contains(":2:"), ParseError);
}

TEST_CASE("save/load round-trips both formats") {
  const auto d = make("rt", {{"hello, \"world\"", Label::positive, Split::train},
                             {"plain", Label::negative, Split::val},
                             {"held out", Label::negative, Split::test}});
  TempDir tmp;
  for (auto format : {FileFormat::csv, FileFormat::jsonl}) {
    const auto p = tmp / (format == FileFormat::csv ? "rt.csv" : "rt.jsonl");
    save_dataset(d, p, format);
    const auto back = load_dataset(p, format, "rt");
    REQUIRE(back.samples.size() == d.samples.size());
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
      CHECK(back.samples[i].text == d.samples[i].text);
      CHECK(back.samples[i].label == d.samples[i].label);
      CHECK(back.split(back.samples[i].id) == d.split(d.samples[i].id));
    }
  }
}

TEST_CASE("format_from_path recognizes extensions") {
  CHECK(format_from_path("x.csv") == FileFormat::csv);
  CHECK(format_from_path("x.jsonl") == FileFormat::jsonl);
  CHECK(format_from_path("x.json") == FileFormat::jsonl);
  CHECK_THROWS_AS(format_from_path("x.tsv"), ConfigError);
}

TEST_CASE("compute_stats counts per split and rounds percentages") {
  const auto d = make("t", {{"a1", Label::positive, Split::train},
                            {"a2", Label::positive, Split::train},
                            {"a3", Label::negative, Split::train},
                            {"a4", Label::negative, Split::train},
                            {"a5", Label::negative, Split::train},
                            {"a6", Label::negative, Split::train},
                            {"b1", Label::positive, Split::val},
                            {"b2", Label::negative, Split::val},
                            {"c1", Label::positive, Split::test},
                            {"c2", Label::negative, Split::test}});
  const auto st = compute_stats(d);
  CHECK(st.n_train == 6);
  CHECK(st.n_val == 2);
  CHECK(st.n_test == 2);
  CHECK(st.pos_train == 2);
  CHECK(st.total() == 10);
  CHECK(st.pct_positive == 40.0);
  CHECK(st.pct_positive_train == doctest::Approx(33.33).epsilon(1e-12));
}

TEST_CASE("stats row renders the documented markdown layout") {
  DatasetStats st;
  st.n_train = 3116;
  st.n_val = 347;
  st.n_test = 887;
  st.pct_positive = 17.62;
  CHECK(format_stats_row("iSarcasm", st) == "| iSarcasm | 3,116 | 347 | 887 | 17.62% |");
  CHECK(format_stats_header() ==
        "| Dataset | Train | Val | Test | % Sarcasm |\n|---|---|---|---|---|");
}

TEST_CASE("dedup keeps first occurrence within and across datasets") {
  const auto a = make("a", {{"shared text", Label::positive, Split::train},
                            {"only in a", Label::negative, Split::train},
                            {"shared text", Label::negative, Split::val}});
  const auto b = make("b", {{"shared text", Label::positive, Split::train},
                            {"only in b", Label::positive, Split::test}});
  DedupReport report;
  const auto out = dedup({a, b}, &report);
  REQUIRE(out.size() == 2);
  CHECK(out[0].samples.size() == 2);  // a keeps its first "shared text"
  CHECK(out[1].samples.size() == 1);  // b loses its copy to a
  REQUIRE(report.dropped.size() == 2);
  CHECK(report.dropped[0].dataset == "a");
  CHECK(report.dropped[0].reason == DroppedDuplicate::Reason::within);
  CHECK(report.dropped[0].kept_id == "a:0");
  CHECK(report.dropped[1].dataset == "b");
  CHECK(report.dropped[1].reason == DroppedDuplicate::Reason::across);
  CHECK(report.dropped[1].kept_id == "a:0");
}

TEST_CASE("merge_train_val folds val into train and promotes test") {
  const auto d = make("m", {{"t1", Label::positive, Split::train},
                            {"v1", Label::negative, Split::val},
                            {"v2", Label::negative, Split::val},
                            {"x1", Label::positive, Split::test}});
  const auto merged = merge_train_val(d);
  CHECK(merged.count_in_split(Split::train) == 3);
  CHECK(merged.count_in_split(Split::val) == 1);
  CHECK(merged.count_in_split(Split::test) == 0);
  CHECK(merged.samples == d.samples);  // only the split map changes
}

TEST_CASE("split_random moves a half-up rounded share of train") {
  std::vector<std::tuple<std::string, Label, Split>> rows;
  for (int i = 0; i < 549; ++i)
    rows.push_back({"text " + std::to_string(i), Label::negative, Split::train});
  const auto d = make("s", rows);

  const auto out = split_random(d, 0.10, 99);
  CHECK(out.count_in_split(Split::val) == 55);  // 54.9 rounds up
  CHECK(out.count_in_split(Split::train) == 494);

  // Deterministic in the seed.
  const auto again = split_random(d, 0.10, 99);
  CHECK(again.split_of == out.split_of);
  const auto other = split_random(d, 0.10, 100);
  CHECK(other.split_of != out.split_of);

  CHECK_THROWS_AS(split_random(d, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(split_random(d, 1.0, 1), ConfigError);
}

TEST_CASE("validate_dataset rejects broken invariants") {
  auto d = make("v", {{"one", Label::positive, Split::train}});
  CHECK_NOTHROW(validate_dataset(d));

  SUBCASE("duplicate id") {
    auto dup = d;
    dup.samples.push_back(dup.samples[0]);
    CHECK_THROWS_AS(validate_dataset(dup), Error);
  }
  SUBCASE("missing split entry") {
    auto missing = d;
    missing.split_of.clear();
    CHECK_THROWS_AS(validate_dataset(missing), Error);
  }
  SUBCASE("augmented without parent") {
    auto orphan = d;
    orphan.samples[0].origin = Origin::augmented;
    CHECK_THROWS_AS(validate_dataset(orphan), Error);
  }
  SUBCASE("parent that does not resolve") {
    auto child = d;
    Sample s;
    s.id = "v:1";
    s.text = "child";
    s.origin = Origin::augmented;
    s.parent_id = "v:404";
    child.split_of[s.id] = Split::train;
    child.samples.push_back(s);
    CHECK_THROWS_AS(validate_dataset(child), Error);
  }
}

TEST_CASE("dataset_checksum tracks content") {
  const auto d = make("c", {{"alpha", Label::positive, Split::train},
                            {"beta", Label::negative, Split::val}});
  const auto base = dataset_checksum(d);
  CHECK(base == dataset_checksum(d));

  auto text_changed = d;
  text_changed.samples[0].text = "alphb";
  CHECK(dataset_checksum(text_changed) != base);

  auto label_changed = d;
  label_changed.samples[1].label = Label::positive;
  CHECK(dataset_checksum(label_changed) != base);

  auto split_changed = d;
  split_changed.split_of["c:1"] = Split::test;
  CHECK(dataset_checksum(split_changed) != base);
}

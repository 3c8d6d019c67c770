// End-to-end checks of the installed CLI surface: each case shells out to the
// real binary and asserts on exit codes and output.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "test_util.hpp"

using nlohmann::json;
using testutil::TempDir;

namespace {

struct Cmd {
  int code = -1;
  std::string out;
  std::string err;
};

Cmd run(const std::string& args) {
  static TempDir capture;
  static int n = 0;
  const auto out_path = capture / ("out" + std::to_string(n));
  const auto err_path = capture / ("err" + std::to_string(n));
  ++n;
  const std::string cmd = std::string(SARCAUG_CLI_BIN) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int status = std::system(cmd.c_str());
  Cmd r;
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  r.out = testutil::read_file(out_path);
  r.err = testutil::read_file(err_path);
  return r;
}

std::string fx(const std::string& name) { return testutil::fixture(name).string(); }

}  // namespace

TEST_CASE("version and help exit cleanly") {
  CHECK(run("--version").code == 0);
  CHECK(run("--version").out.find("sarcaug") != std::string::npos);
  CHECK(run("--help").code == 0);
  CHECK(run("stats --help").code == 0);
}

TEST_CASE("usage problems exit with code 2") {
  CHECK(run("").code == 2);                       // a subcommand is required
  CHECK(run("stats --nope").code == 2);           // unknown flag
  CHECK(run("stats").code == 2);                  // missing --input
  CHECK(run("frobnicate").code == 2);             // unknown subcommand
  CHECK(run("stats --input x.csv --format xml").code == 2);
}

TEST_CASE("config and data problems exit with codes 3 and 4") {
  TempDir tmp;
  // unreadable input file -> data error
  CHECK(run("stats --input " + (tmp / "missing.csv").string()).code == 4);

  // unparsable dataset content -> data error
  const auto bad = tmp / "bad.csv";
  testutil::write_file(bad, "text,label\nhello,maybe\n");
  CHECK(run("stats --input " + bad.string()).code == 4);

  // bad option value caught by the library -> config error
  const auto ok = tmp / "ok.csv";
  testutil::write_file(ok, "text,label,split\nsure fine,sarcastic,train\nmeh,not_sarcastic,train\n");
  CHECK(run("augment --input " + ok.string() + " --output " + (tmp / "o.csv").string() +
            " --embeddings " + fx("mini_glove.txt") + " --target-label bogus")
            .code == 3);

  // plan with an unknown field -> config error
  const auto plan = tmp / "plan.json";
  testutil::write_file(plan, R"({"datasets":[],"levls":[0]})");
  CHECK(run("experiment --plan " + plan.string()).code == 3);
}

TEST_CASE("stats renders the markdown table or json") {
  const auto md = run("stats --input " + fx("tiny10.csv"));
  CHECK(md.code == 0);
  CHECK(md.out ==
        "| Dataset | Train | Val | Test | % Sarcasm |\n"
        "|---|---|---|---|---|\n"
        "| tiny10 | 6 | 2 | 2 | 40.00% |\n");

  const auto js = run("stats --input " + fx("tiny10.csv") + " --name renamed --json");
  CHECK(js.code == 0);
  const auto j = json::parse(js.out);
  CHECK(j.at("dataset") == "renamed");
  CHECK(j.at("n_train") == 6);
  CHECK(j.at("pct_positive") == 40.0);
}

TEST_CASE("preprocess, augment, train, evaluate, export chain together") {
  TempDir tmp;

  const auto raw = tmp / "raw.csv";
  testutil::write_file(raw,
                       "text,label,split\n"
                       "Amazing stuff!! https://t.co/x #yay,sarcastic,train\n"
                       "\"THIS is fine, really\",not_sarcastic,train\n"
                       "!!!,not_sarcastic,train\n");
  const auto cleaned = tmp / "cleaned.csv";
  const auto pre =
      run("preprocess --input " + raw.string() + " --output " + cleaned.string() + " --json");
  CHECK(pre.code == 0);
  const auto prej = json::parse(pre.out);
  CHECK(prej.at("kept") == 2);  // the punctuation-only row drops
  CHECK(prej.at("dropped_ids").size() == 1);

  const auto aug_out = tmp / "augmented.csv";
  const auto aug = run("augment --input " + fx("augment_corpus.csv") + " --output " +
                       aug_out.string() + " --embeddings " + fx("mini_glove.txt") +
                       " --pct 20 --seed 9 --json");
  CHECK(aug.code == 0);
  const auto augj = json::parse(aug.out);
  CHECK(augj.at("requested") == 20);
  CHECK(augj.at("generated") == 20);
  CHECK(augj.at("output") == aug_out.string());

  const auto grown = run("stats --input " + aug_out.string() + " --json");
  CHECK(json::parse(grown.out).at("n_train") == 320);  // 300 + 20 generated

  const auto model = tmp / "model.json";
  const auto tr = run("train --input " + aug_out.string() + " --embeddings " +
                      fx("mini_glove.txt") + " --model-out " + model.string() +
                      " --learning-rate 0.5 --epochs 3 --json");
  CHECK(tr.code == 0);
  CHECK(std::filesystem::exists(model));
  const auto trj = json::parse(tr.out);
  CHECK(trj.at("n_train") == 320);
  CHECK(trj.at("epochs") == 3);

  const auto ev = run("evaluate --input " + aug_out.string() + " --embeddings " +
                      fx("mini_glove.txt") + " --model " + model.string() +
                      " --split val --json");
  CHECK(ev.code == 0);
  const auto evj = json::parse(ev.out);
  CHECK(evj.contains("f_score"));
  CHECK(evj.contains("mcc"));
  CHECK(evj.at("tp").is_number());

  const auto exp_dir = tmp / "export";
  const auto ex = run("export --input " + aug_out.string() + " --output " +
                      exp_dir.string() + " --seed 9 --fingerprint abc123 --json");
  CHECK(ex.code == 0);
  for (const char* f : {"train.jsonl", "val.jsonl", "test.jsonl", "manifest.json"})
    CHECK(std::filesystem::exists(exp_dir / f));
  CHECK(json::parse(ex.out).at("counts").at("train") == 320);
}

TEST_CASE("experiment runs a plan and report renders its tables") {
  TempDir tmp;
  json plan;
  plan["datasets"] =
      json::array({{{"name", "mini"}, {"path", fx("augment_corpus.csv")}}});
  plan["levels"] = {0, 10};
  plan["embedding_path"] = fx("mini_glove.txt");
  plan["output_dir"] = (tmp / "results").string();
  plan["master_seed"] = 3;
  const auto plan_path = tmp / "plan.json";
  testutil::write_file(plan_path, plan.dump(2));

  const auto ex = run("experiment --plan " + plan_path.string() + " --json");
  CHECK(ex.code == 0);
  const auto exj = json::parse(ex.out);
  CHECK(exj.at("results").size() == 2);
  CHECK(exj.at("failures").empty());

  const auto md = run("report --results " + (tmp / "results").string());
  CHECK(md.code == 0);
  CHECK(md.out.find("## F-score") != std::string::npos);
  CHECK(md.out.find("| mini |") != std::string::npos);

  const auto deltas = run("report --results " + (tmp / "results").string() + " --deltas");
  CHECK(deltas.code == 0);
  CHECK(deltas.out.find("delta vs non-augmented") != std::string::npos);

  const auto csv = run("report --results " + (tmp / "results").string() + " --format csv");
  CHECK(csv.code == 0);
  CHECK(csv.out.find("dataset,level,metric,value\n") == 0);

  const auto to_file = run("report --results " + (tmp / "results").string() + " --out " +
                           (tmp / "report.md").string());
  CHECK(to_file.code == 0);
  CHECK(testutil::read_file(tmp / "report.md").find("## MCC") != std::string::npos);

  SUBCASE("a plan with an unreadable dataset exits with partial failure") {
    plan["datasets"].push_back({{"name", "ghost"}, {"path", (tmp / "none.csv").string()}});
    testutil::write_file(plan_path, plan.dump(2));
    const auto part = run("experiment --plan " + plan_path.string());
    CHECK(part.code == 1);
    CHECK(part.err.find("ghost") != std::string::npos);
  }
  SUBCASE("report on a directory without results is a data error") {
    CHECK(run("report --results " + (tmp / "void").string()).code == 4);
  }
}

TEST_CASE("experiment seed and output overrides take effect") {
  TempDir tmp;
  json plan;
  plan["datasets"] =
      json::array({{{"name", "mini"}, {"path", fx("augment_corpus.csv")}}});
  plan["levels"] = {10};
  plan["embedding_path"] = fx("mini_glove.txt");
  plan["output_dir"] = (tmp / "unused").string();
  const auto plan_path = tmp / "plan.json";
  testutil::write_file(plan_path, plan.dump(2));

  const auto a = run("experiment --plan " + plan_path.string() + " --seed 1 --output " +
                     (tmp / "s1").string() + " --json");
  const auto b = run("experiment --plan " + plan_path.string() + " --seed 2 --output " +
                     (tmp / "s2").string() + " --json");
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK_FALSE(std::filesystem::exists(tmp / "unused"));
  CHECK(std::filesystem::exists(tmp / "s1" / "manifest.json"));
  const auto sa = json::parse(a.out).at("results")[0].at("seed").get<std::uint64_t>();
  const auto sb = json::parse(b.out).at("results")[0].at("seed").get<std::uint64_t>();
  CHECK(sa != sb);  // master seed feeds the per-cell seeds
}

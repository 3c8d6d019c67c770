// sarcaug CLI: dataset stats, tweet preprocessing, embedding-neighbor
// augmentation, the baseline trainer, and the experiment matrix.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sarcaug/sarcaug.hpp"

namespace {

using namespace sarcaug;
namespace fs = std::filesystem;
using nlohmann::json;

FileFormat pick_format(const fs::path& path, const std::string& override_token) {
  if (override_token == "csv") return FileFormat::csv;
  if (override_token == "jsonl") return FileFormat::jsonl;
  return format_from_path(path);
}

Dataset load_input(const fs::path& path, const std::string& format_token,
                   const std::string& name) {
  const FileFormat f = pick_format(path, format_token);
  return name.empty() ? load_dataset(path, f) : load_dataset(path, f, name);
}

EmbeddingTable load_table(const fs::path& path, const fs::path& cache) {
  // plain query route only: exact, deterministic, and faster at GloVe dims
  return cache.empty() ? load_embeddings(path) : load_embeddings_cached(path, cache);
}

void add_format_option(CLI::App* cmd, std::string& token) {
  cmd->add_option("--format", token, "Input format (default: by extension)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

void emit(const std::string& text) { std::cout << text << "\n"; }

// ---- stats --------------------------------------------------------------

struct StatsOpts {
  std::string input, format, name;
  bool as_json = false;
};

int cmd_stats(const StatsOpts& o) {
  const Dataset d = load_input(o.input, o.format, o.name);
  const DatasetStats s = compute_stats(d);
  if (o.as_json) {
    json j;
    j["dataset"] = d.name;
    j["n_train"] = s.n_train;
    j["n_val"] = s.n_val;
    j["n_test"] = s.n_test;
    j["pos_train"] = s.pos_train;
    j["pos_val"] = s.pos_val;
    j["pos_test"] = s.pos_test;
    j["pct_positive"] = s.pct_positive;
    j["pct_positive_train"] = s.pct_positive_train;
    j["pct_positive_val"] = s.pct_positive_val;
    j["pct_positive_test"] = s.pct_positive_test;
    emit(j.dump());
  } else {
    emit(format_stats_header());
    emit(format_stats_row(d.name, s));
  }
  return kExitOk;
}

// ---- preprocess ---------------------------------------------------------

struct PreprocessOpts {
  std::string input, output, format, name;
  PipelineConfig cfg;
  std::string trim_unit = "tokens";
  std::string stopwords_path, contractions_path;
  bool as_json = false;
};

int cmd_preprocess(PreprocessOpts& o) {
  o.cfg.trim_unit = o.trim_unit == "chars" ? TrimUnit::chars : TrimUnit::tokens;
  if (!o.stopwords_path.empty()) o.cfg.stopwords = load_stopwords(o.stopwords_path);
  if (!o.contractions_path.empty())
    o.cfg.contractions = load_contractions(o.contractions_path);

  const Dataset d = load_input(o.input, o.format, o.name);
  PreprocessReport report;
  const Dataset out = preprocess_dataset(d, o.cfg, &report);
  save_dataset(out, o.output, format_from_path(o.output));

  if (o.as_json) {
    json j;
    j["input"] = o.input;
    j["output"] = o.output;
    j["kept"] = out.samples.size();
    j["dropped_ids"] = report.dropped_ids;
    emit(j.dump());
  } else {
    std::cerr << "preprocess: kept " << out.samples.size() << " of "
              << d.samples.size() << " samples";
    if (!report.dropped_ids.empty())
      std::cerr << " (" << report.dropped_ids.size() << " cleaned to empty)";
    std::cerr << "\n";
    emit("wrote " + o.output);
  }
  return kExitOk;
}

// ---- augment ------------------------------------------------------------

struct AugmentOpts {
  std::string input, output, format, name;
  std::string embeddings, cache;
  AugmentPolicy policy;
  std::string target_label = "sarcastic";
  bool as_json = false;
};

int cmd_augment(AugmentOpts& o) {
  const auto label = parse_label(o.target_label);
  if (!label) throw ConfigError("unknown --target-label '" + o.target_label + "'");
  o.policy.target_label = *label;

  const Dataset d = load_input(o.input, o.format, o.name);
  const EmbeddingTable t = load_table(o.embeddings, o.cache);
  auto [augmented, report] = augment_class(d, t, o.policy);
  save_dataset(augmented, o.output, format_from_path(o.output));

  if (o.as_json) {
    json j = json::parse(report.to_json());
    j["output"] = o.output;
    emit(j.dump());
  } else {
    emit("requested " + std::to_string(report.requested) + ", generated " +
         std::to_string(report.generated) + " (" + std::to_string(report.attempts) +
         " attempts, " + std::to_string(report.rejected_duplicates) +
         " duplicates rejected, " + std::to_string(report.exhausted_sources) +
         " sources exhausted)");
    emit("wrote " + o.output);
  }
  return kExitOk;
}

// ---- train --------------------------------------------------------------

struct TrainOpts {
  std::string input, format, name;
  std::string embeddings, cache;
  std::string model_out;
  ClassifierConfig cfg;
  bool auto_profile = false;
  bool as_json = false;
};

int cmd_train(TrainOpts& o) {
  const Dataset d = load_input(o.input, o.format, o.name);
  std::vector<Sample> train_split;
  for (const auto& s : d.samples)
    if (d.split(s.id) == Split::train) train_split.push_back(s);

  if (o.auto_profile) {
    const ClassifierConfig prof = config_for_dataset_size(train_split.size());
    o.cfg.train_batch_size = prof.train_batch_size;
    o.cfg.num_train_epochs = prof.num_train_epochs;
  }

  const EmbeddingTable t = load_table(o.embeddings, o.cache);
  const TrainedModel m = train(train_split, o.cfg, t);
  if (!o.model_out.empty()) save_model(m, o.model_out);

  if (o.as_json) {
    json j;
    j["n_train"] = train_split.size();
    j["dim"] = m.dim;
    j["config_fingerprint"] = m.config_fingerprint;
    j["epochs"] = o.cfg.num_train_epochs;
    j["batch_size"] = o.cfg.train_batch_size;
    if (!o.model_out.empty()) j["model"] = o.model_out;
    emit(j.dump());
  } else {
    emit("trained on " + std::to_string(train_split.size()) + " samples (dim " +
         std::to_string(m.dim) + ", fingerprint " + m.config_fingerprint + ")");
    if (!o.model_out.empty()) emit("wrote " + o.model_out);
  }
  return kExitOk;
}

// ---- evaluate -----------------------------------------------------------

struct EvaluateOpts {
  std::string input, format, name;
  std::string embeddings, cache;
  std::string model;
  std::string split = "val";
  bool as_json = false;
};

int cmd_evaluate(const EvaluateOpts& o) {
  const auto split = parse_split(o.split);
  if (!split) throw ConfigError("unknown --split '" + o.split + "'");

  const Dataset d = load_input(o.input, o.format, o.name);
  const EmbeddingTable t = load_table(o.embeddings, o.cache);
  const TrainedModel m = load_model(o.model);

  std::vector<Label> preds, gold;
  for (const auto& s : d.samples) {
    if (d.split(s.id) != *split) continue;
    gold.push_back(s.label);
    preds.push_back(predict(m, s.text, t).first);
  }
  if (gold.empty())
    throw ConfigError("no samples in split '" + o.split + "' of " + o.input);
  const MetricSet metrics = evaluate(preds, gold);

  if (o.as_json) {
    emit(to_json(metrics));
  } else {
    emit("precision " + format_fixed(metrics.precision, 4) + "  recall " +
         format_fixed(metrics.recall, 4) + "  f_score " +
         format_fixed(metrics.f_score, 4) + "  mcc " + format_fixed(metrics.mcc, 4));
    emit("tp " + std::to_string(metrics.cm.tp) + "  tn " + std::to_string(metrics.cm.tn) +
         "  fp " + std::to_string(metrics.cm.fp) + "  fn " +
         std::to_string(metrics.cm.fn));
  }
  return kExitOk;
}

// ---- experiment ---------------------------------------------------------

struct ExperimentOpts {
  std::string plan_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string output_dir;
  bool as_json = false;
};

int cmd_experiment(const ExperimentOpts& o) {
  ExperimentPlan plan = load_plan(o.plan_path);
  if (o.seed) plan.master_seed = *o.seed;
  if (o.threads) plan.threads = *o.threads;
  if (!o.output_dir.empty()) plan.output_dir = o.output_dir;

  const ExperimentOutcome outcome = run_experiment(plan);

  if (o.as_json) {
    json j;
    json jr = json::array();
    for (const auto& r : outcome.results) {
      json e = json::parse(to_json(r.metrics));
      jr.push_back({{"dataset", r.dataset},
                    {"level", r.level},
                    {"metrics", e},
                    {"run_path", r.run_path},
                    {"seed", r.seed}});
    }
    json jf = json::array();
    for (const auto& f : outcome.failures)
      jf.push_back({{"dataset", f.dataset}, {"level", f.level}, {"error", f.error}});
    j["results"] = jr;
    j["failures"] = jf;
    j["output_dir"] = plan.output_dir.generic_string();
    emit(j.dump());
  } else {
    emit(std::to_string(outcome.results.size()) + " cells completed, " +
         std::to_string(outcome.failures.size()) + " failed; results in " +
         plan.output_dir.generic_string());
    for (const auto& f : outcome.failures)
      std::cerr << "failed: " << f.dataset << " level " << format_level(f.level) << ": "
                << f.error << "\n";
  }
  return outcome.failures.empty() ? kExitOk : kExitPartialFailure;
}

// ---- report -------------------------------------------------------------

struct ReportOpts {
  std::string results_dir;
  std::string format = "markdown";
  bool deltas = false;
  std::string out_path;
};

int cmd_report(const ReportOpts& o) {
  const std::vector<RunResult> results = load_results(o.results_dir);
  const ReportFormat fmt =
      o.format == "csv" ? ReportFormat::csv : ReportFormat::markdown;
  const std::string doc = emit_report(results, fmt, o.deltas);
  if (o.out_path.empty()) {
    std::cout << doc;
  } else {
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + o.out_path);
    out << doc;
  }
  return kExitOk;
}

// ---- export -------------------------------------------------------------

struct ExportOpts {
  std::string input, format, name;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::string fingerprint;
  std::string augment_report_path;
  bool as_json = false;
};

int cmd_export(const ExportOpts& o) {
  const Dataset d = load_input(o.input, o.format, o.name);
  ExportContext ctx;
  ctx.seed = o.seed;
  ctx.config_fingerprint = o.fingerprint;
  if (!o.augment_report_path.empty()) {
    std::ifstream in(o.augment_report_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + o.augment_report_path);
    json j;
    try {
      in >> j;
      AugmentReport r;
      r.requested = j.at("requested").get<std::size_t>();
      r.generated = j.at("generated").get<std::size_t>();
      r.rejected_duplicates = j.at("rejected_duplicates").get<std::size_t>();
      r.exhausted_sources = j.at("exhausted_sources").get<std::size_t>();
      r.attempts = j.at("attempts").get<std::size_t>();
      ctx.augment_report = r;
    } catch (const json::exception& e) {
      throw sarcaug::ParseError(o.augment_report_path, 0, e.what());
    }
  }
  export_for_external_trainer(d, o.output_dir, ctx);
  if (o.as_json) {
    json j;
    j["output_dir"] = o.output_dir;
    j["counts"] = {{"train", d.count_in_split(Split::train)},
                   {"val", d.count_in_split(Split::val)},
                   {"test", d.count_in_split(Split::test)}};
    emit(j.dump());
  } else {
    emit("exported " + std::to_string(d.samples.size()) + " samples to " + o.output_dir);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sarcasm-dataset augmentation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sarcaug 0.1.0");

  int rc = kExitOk;

  StatsOpts stats;
  auto* cmd = app.add_subcommand("stats", "Split sizes and class balance of a dataset");
  cmd->add_option("--input", stats.input, "Dataset file")->required();
  add_format_option(cmd, stats.format);
  cmd->add_option("--name", stats.name, "Dataset name (default: file stem)");
  cmd->add_flag("--json", stats.as_json, "Machine-readable output");
  cmd->callback([&] { rc = cmd_stats(stats); });

  PreprocessOpts pre;
  cmd = app.add_subcommand("preprocess", "Normalize, clean, and trim tweet texts");
  cmd->add_option("--input", pre.input, "Dataset file")->required();
  cmd->add_option("--output", pre.output, "Cleaned dataset file")->required();
  add_format_option(cmd, pre.format);
  cmd->add_option("--name", pre.name, "Dataset name (default: file stem)");
  cmd->add_option("--max-len", pre.cfg.max_len_tokens, "Trim limit (default 100)");
  cmd->add_option("--trim-unit", pre.trim_unit, "tokens|chars (default tokens)")
      ->check(CLI::IsMember({"tokens", "chars"}));
  cmd->add_flag("!--no-lowercase", pre.cfg.lowercase, "Keep letter case");
  cmd->add_flag("!--keep-bracketed", pre.cfg.strip_bracketed, "Keep bracketed spans");
  cmd->add_flag("!--keep-urls", pre.cfg.strip_urls, "Keep URL tokens");
  cmd->add_flag("!--keep-hashtags", pre.cfg.strip_hashtags, "Keep hashtag tokens");
  cmd->add_flag("!--keep-mentions", pre.cfg.strip_mentions, "Keep @-mention tokens");
  cmd->add_flag("!--keep-emoji", pre.cfg.strip_emoji, "Keep emoji");
  cmd->add_flag("!--keep-non-ascii", pre.cfg.strip_non_ascii, "Keep non-ASCII codepoints");
  cmd->add_flag("!--keep-stopwords", pre.cfg.remove_stopwords, "Skip stopword removal");
  cmd->add_option("--stopwords", pre.stopwords_path, "Stopword list override");
  cmd->add_option("--contractions", pre.contractions_path, "Contraction table override");
  cmd->add_flag("--json", pre.as_json, "Machine-readable output");
  cmd->callback([&] { rc = cmd_preprocess(pre); });

  AugmentOpts aug;
  cmd = app.add_subcommand("augment", "Grow the minority class by neighbor replacement");
  cmd->add_option("--input", aug.input, "Dataset file (already preprocessed)")->required();
  cmd->add_option("--output", aug.output, "Augmented dataset file")->required();
  cmd->add_option("--embeddings", aug.embeddings, "GloVe-format embedding file")->required();
  cmd->add_option("--cache", aug.cache, "Binary embedding cache path");
  add_format_option(cmd, aug.format);
  cmd->add_option("--name", aug.name, "Dataset name (default: file stem)");
  cmd->add_option("--pct", aug.policy.increase_pct, "Class increase percent (default 20)");
  cmd->add_option("--target-label", aug.target_label,
                  "Class to grow (default sarcastic)");
  cmd->add_option("--words-per-sentence", aug.policy.words_per_sentence,
                  "Replacements per sentence (default 1)");
  cmd->add_option("--k", aug.policy.k_candidates, "Neighbor pool size (default 5)");
  cmd->add_option("--min-similarity", aug.policy.min_similarity,
                  "Cosine floor for candidates (default 0.5)");
  cmd->add_option("--max-attempts", aug.policy.max_attempts_per_sample,
                  "Attempt cap per source (default 10)");
  cmd->add_option("--seed", aug.policy.seed, "Generation seed");
  cmd->add_flag("--json", aug.as_json, "Machine-readable output");
  cmd->callback([&] { rc = cmd_augment(aug); });

  TrainOpts tr;
  cmd = app.add_subcommand("train", "Fit the baseline classifier on the train split");
  cmd->add_option("--input", tr.input, "Dataset file")->required();
  cmd->add_option("--embeddings", tr.embeddings, "GloVe-format embedding file")->required();
  cmd->add_option("--cache", tr.cache, "Binary embedding cache path");
  add_format_option(cmd, tr.format);
  cmd->add_option("--name", tr.name, "Dataset name (default: file stem)");
  cmd->add_option("--model-out", tr.model_out, "Where to save the model JSON");
  cmd->add_option("--learning-rate", tr.cfg.learning_rate, "Peak rate (default 1e-5)");
  cmd->add_option("--weight-decay", tr.cfg.weight_decay, "Decoupled decay (default 0.01)");
  cmd->add_option("--warmup-ratio", tr.cfg.warmup_ratio, "Warmup fraction (default 0.2)");
  cmd->add_option("--max-grad-norm", tr.cfg.max_grad_norm, "Clip threshold (default 1.0)");
  cmd->add_option("--epochs", tr.cfg.num_train_epochs, "Training epochs (default 13)");
  cmd->add_option("--batch-size", tr.cfg.train_batch_size, "Mini-batch size (default 16)");
  cmd->add_option("--max-seq-length", tr.cfg.max_seq_length,
                  "Token cap per text (default 40)");
  cmd->add_option("--seed", tr.cfg.manual_seed, "Shuffle seed (default 128)");
  cmd->add_flag("--auto-profile", tr.auto_profile,
                "Pick batch/epochs from the train-split size");
  cmd->add_flag("--json", tr.as_json, "Machine-readable output");
  cmd->callback([&] { rc = cmd_train(tr); });

  EvaluateOpts ev;
  cmd = app.add_subcommand("evaluate", "Score a saved model on a split");
  cmd->add_option("--input", ev.input, "Dataset file")->required();
  cmd->add_option("--embeddings", ev.embeddings, "GloVe-format embedding file")->required();
  cmd->add_option("--cache", ev.cache, "Binary embedding cache path");
  cmd->add_option("--model", ev.model, "Model JSON from `train`")->required();
  add_format_option(cmd, ev.format);
  cmd->add_option("--name", ev.name, "Dataset name (default: file stem)");
  cmd->add_option("--split", ev.split, "train|val|test (default val)")
      ->check(CLI::IsMember({"train", "val", "test"}));
  cmd->add_flag("--json", ev.as_json, "Machine-readable output");
  cmd->callback([&] { rc = cmd_evaluate(ev); });

  ExperimentOpts ex;
  cmd = app.add_subcommand("experiment", "Run the dataset x augmentation-level matrix");
  cmd->add_option("--plan", ex.plan_path, "Plan JSON file")->required();
  cmd->add_option("--seed", ex.seed, "Override the plan's master_seed");
  cmd->add_option("--threads", ex.threads, "Override the plan's worker count");
  cmd->add_option("--output", ex.output_dir, "Override the plan's output_dir");
  cmd->add_flag("--json", ex.as_json, "Machine-readable output");
  cmd->callback([&] { rc = cmd_experiment(ex); });

  ReportOpts rep;
  cmd = app.add_subcommand("report", "Render result tables from an experiment run");
  cmd->add_option("--results", rep.results_dir, "Experiment output directory")->required();
  cmd->add_option("--format", rep.format, "markdown|csv (default markdown)")
      ->check(CLI::IsMember({"markdown", "csv"}));
  cmd->add_flag("--deltas", rep.deltas, "Add point-delta tables vs level 0");
  cmd->add_option("--out", rep.out_path, "Write to a file instead of stdout");
  cmd->callback([&] { rc = cmd_report(rep); });

  ExportOpts exp;
  cmd = app.add_subcommand("export", "Write train/val/test JSONL plus a manifest");
  cmd->add_option("--input", exp.input, "Dataset file")->required();
  cmd->add_option("--output", exp.output_dir, "Export directory")->required();
  add_format_option(cmd, exp.format);
  cmd->add_option("--name", exp.name, "Dataset name (default: file stem)");
  cmd->add_option("--seed", exp.seed, "Seed recorded in the manifest");
  cmd->add_option("--fingerprint", exp.fingerprint,
                  "Config fingerprint recorded in the manifest");
  cmd->add_option("--augment-report", exp.augment_report_path,
                  "Augmentation report JSON to embed");
  cmd->add_flag("--json", exp.as_json, "Machine-readable output");
  cmd->callback([&] { rc = cmd_export(exp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sarcaug::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return rc;
}

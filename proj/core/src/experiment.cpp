#include "sarcaug/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sarcaug/errors.hpp"
#include "sarcaug/numeric.hpp"
#include "sarcaug/rng.hpp"
#include "warn.hpp"

namespace sarcaug {

namespace {

using nlohmann::json;

json level_json(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return static_cast<std::int64_t>(v);
  return v;
}

void check_keys(const json& obj, const std::string& scope,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("plan: unknown field '" + scope + it.key() + "'");
  }
}

template <typename T>
bool get_field(const json& obj, const std::string& scope, const char* key, T& target,
               bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError("plan: missing field '" + scope + key + "'");
    return false;
  }
  try {
    obj.at(key).get_to(target);
  } catch (const json::exception& e) {
    throw ConfigError("plan: field '" + scope + key + "': " + e.what());
  }
  return true;
}

bool get_path(const json& obj, const std::string& scope, const char* key,
              std::filesystem::path& target, bool required = false) {
  std::string s;
  if (!get_field(obj, scope, key, s, required)) return false;
  target = s;
  return true;
}

void parse_pipeline(const json& obj, PipelineConfig& cfg) {
  check_keys(obj, "pipeline.",
             {"max_len_tokens", "trim_unit", "lowercase", "strip_bracketed",
              "strip_urls", "strip_hashtags", "strip_mentions", "strip_emoji",
              "strip_non_ascii", "remove_stopwords", "stopwords_path",
              "contractions_path"});
  get_field(obj, "pipeline.", "max_len_tokens", cfg.max_len_tokens);
  std::string unit;
  if (get_field(obj, "pipeline.", "trim_unit", unit)) {
    if (unit == "tokens")
      cfg.trim_unit = TrimUnit::tokens;
    else if (unit == "chars")
      cfg.trim_unit = TrimUnit::chars;
    else
      throw ConfigError("plan: field 'pipeline.trim_unit': expected \"tokens\" or \"chars\"");
  }
  get_field(obj, "pipeline.", "lowercase", cfg.lowercase);
  get_field(obj, "pipeline.", "strip_bracketed", cfg.strip_bracketed);
  get_field(obj, "pipeline.", "strip_urls", cfg.strip_urls);
  get_field(obj, "pipeline.", "strip_hashtags", cfg.strip_hashtags);
  get_field(obj, "pipeline.", "strip_mentions", cfg.strip_mentions);
  get_field(obj, "pipeline.", "strip_emoji", cfg.strip_emoji);
  get_field(obj, "pipeline.", "strip_non_ascii", cfg.strip_non_ascii);
  get_field(obj, "pipeline.", "remove_stopwords", cfg.remove_stopwords);
  std::filesystem::path p;
  if (get_path(obj, "pipeline.", "stopwords_path", p)) cfg.stopwords = load_stopwords(p);
  if (get_path(obj, "pipeline.", "contractions_path", p))
    cfg.contractions = load_contractions(p);
}

void parse_augment(const json& obj, AugmentPolicy& p) {
  check_keys(obj, "augment.",
             {"target_label", "words_per_sentence", "k_candidates", "min_similarity",
              "max_attempts_per_sample"});
  std::string label;
  if (get_field(obj, "augment.", "target_label", label)) {
    const auto parsed = parse_label(label);
    if (!parsed)
      throw ConfigError("plan: field 'augment.target_label': unknown label '" + label + "'");
    p.target_label = *parsed;
  }
  get_field(obj, "augment.", "words_per_sentence", p.words_per_sentence);
  get_field(obj, "augment.", "k_candidates", p.k_candidates);
  get_field(obj, "augment.", "min_similarity", p.min_similarity);
  get_field(obj, "augment.", "max_attempts_per_sample", p.max_attempts_per_sample);
}

void parse_classifier(const json& obj, ClassifierConfig& cfg) {
  check_keys(obj, "classifier.",
             {"learning_rate", "weight_decay", "warmup_ratio", "max_grad_norm",
              "num_train_epochs", "train_batch_size", "max_seq_length", "manual_seed"});
  get_field(obj, "classifier.", "learning_rate", cfg.learning_rate);
  get_field(obj, "classifier.", "weight_decay", cfg.weight_decay);
  get_field(obj, "classifier.", "warmup_ratio", cfg.warmup_ratio);
  get_field(obj, "classifier.", "max_grad_norm", cfg.max_grad_norm);
  get_field(obj, "classifier.", "num_train_epochs", cfg.num_train_epochs);
  get_field(obj, "classifier.", "train_batch_size", cfg.train_batch_size);
  get_field(obj, "classifier.", "max_seq_length", cfg.max_seq_length);
  get_field(obj, "classifier.", "manual_seed", cfg.manual_seed);
}

}  // namespace

void validate_plan(const ExperimentPlan& plan) {
  if (plan.datasets.empty()) throw ConfigError("plan: datasets must be non-empty");
  std::set<std::string> names;
  for (const auto& d : plan.datasets) {
    if (d.name.empty()) throw ConfigError("plan: dataset name must be non-empty");
    if (d.name.find('/') != std::string::npos || d.name.find('\\') != std::string::npos ||
        d.name == "." || d.name == "..")
      throw ConfigError("plan: dataset name '" + d.name + "' is not filesystem-safe");
    if (!names.insert(d.name).second)
      throw ConfigError("plan: duplicate dataset name '" + d.name + "'");
    if (d.path.empty()) throw ConfigError("plan: dataset path must be non-empty");
  }
  if (plan.levels.empty()) throw ConfigError("plan: levels must be non-empty");
  std::set<std::string> level_names;
  for (double l : plan.levels) {
    if (l < 0.0 || !std::isfinite(l))
      throw ConfigError("plan: levels must be finite and >= 0");
    if (!level_names.insert(format_level(l)).second)
      throw ConfigError("plan: duplicate level " + format_level(l));
  }
  if (plan.embedding_path.empty()) throw ConfigError("plan: embedding_path must be set");
  if (plan.output_dir.empty()) throw ConfigError("plan: output_dir must be set");
  if (plan.threads < 1) throw ConfigError("plan: threads must be >= 1");
  validate_classifier_config(plan.classifier);
  AugmentPolicy probe = plan.policy_template;
  probe.increase_pct = 1.0;  // filled per level; only the other knobs are the plan's
  validate_policy(probe);
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open plan file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("plan " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("plan " + path.string() + ": expected a JSON object");

  check_keys(j, "",
             {"datasets", "levels", "embedding_path", "embedding_cache", "master_seed",
              "output_dir", "threads", "auto_size_profile", "pipeline", "augment",
              "classifier"});

  ExperimentPlan plan;
  if (!j.contains("datasets")) throw ConfigError("plan: missing field 'datasets'");
  try {
    std::size_t i = 0;
    for (const auto& entry : j.at("datasets")) {
      const std::string scope = "datasets[" + std::to_string(i) + "].";
      if (!entry.is_object())
        throw ConfigError("plan: field 'datasets[" + std::to_string(i) +
                          "]': expected an object");
      check_keys(entry, scope, {"name", "path"});
      DatasetRef ref;
      get_field(entry, scope, "name", ref.name, true);
      get_path(entry, scope, "path", ref.path, true);
      plan.datasets.push_back(std::move(ref));
      ++i;
    }
  } catch (const json::exception& e) {
    throw ConfigError("plan: field 'datasets': " + std::string(e.what()));
  }
  get_field(j, "", "levels", plan.levels, true);
  get_path(j, "", "embedding_path", plan.embedding_path, true);
  std::filesystem::path cache;  // explicit null means the same as absent
  if (j.contains("embedding_cache") && !j.at("embedding_cache").is_null() &&
      get_path(j, "", "embedding_cache", cache))
    plan.embedding_cache = cache;
  get_field(j, "", "master_seed", plan.master_seed);
  get_path(j, "", "output_dir", plan.output_dir, true);
  get_field(j, "", "threads", plan.threads);
  get_field(j, "", "auto_size_profile", plan.auto_size_profile);
  if (j.contains("pipeline")) parse_pipeline(j.at("pipeline"), plan.pipeline);
  if (j.contains("augment")) parse_augment(j.at("augment"), plan.policy_template);
  if (j.contains("classifier")) parse_classifier(j.at("classifier"), plan.classifier);
  // augmentation eligibility honors the same stopword list the pipeline uses
  plan.policy_template.stopwords = plan.pipeline.stopwords;

  validate_plan(plan);
  return plan;
}

std::string plan_to_json(const ExperimentPlan& plan) {
  json j;
  json ds = json::array();
  for (const auto& d : plan.datasets)
    ds.push_back({{"name", d.name}, {"path", d.path.generic_string()}});
  j["datasets"] = ds;
  json levels = json::array();
  for (double l : plan.levels) levels.push_back(level_json(l));
  j["levels"] = levels;
  j["embedding_path"] = plan.embedding_path.generic_string();
  if (plan.embedding_cache)
    j["embedding_cache"] = plan.embedding_cache->generic_string();
  j["master_seed"] = plan.master_seed;
  j["output_dir"] = plan.output_dir.generic_string();
  j["threads"] = plan.threads;
  j["auto_size_profile"] = plan.auto_size_profile;
  j["pipeline"] = {{"max_len_tokens", plan.pipeline.max_len_tokens},
                   {"trim_unit", plan.pipeline.trim_unit == TrimUnit::tokens ? "tokens" : "chars"},
                   {"lowercase", plan.pipeline.lowercase},
                   {"strip_bracketed", plan.pipeline.strip_bracketed},
                   {"strip_urls", plan.pipeline.strip_urls},
                   {"strip_hashtags", plan.pipeline.strip_hashtags},
                   {"strip_mentions", plan.pipeline.strip_mentions},
                   {"strip_emoji", plan.pipeline.strip_emoji},
                   {"strip_non_ascii", plan.pipeline.strip_non_ascii},
                   {"remove_stopwords", plan.pipeline.remove_stopwords}};
  j["augment"] = {{"target_label", std::string(label_token(plan.policy_template.target_label))},
                  {"words_per_sentence", plan.policy_template.words_per_sentence},
                  {"k_candidates", plan.policy_template.k_candidates},
                  {"min_similarity", plan.policy_template.min_similarity},
                  {"max_attempts_per_sample", plan.policy_template.max_attempts_per_sample}};
  j["classifier"] = {{"learning_rate", plan.classifier.learning_rate},
                     {"weight_decay", plan.classifier.weight_decay},
                     {"warmup_ratio", plan.classifier.warmup_ratio},
                     {"max_grad_norm", plan.classifier.max_grad_norm},
                     {"num_train_epochs", plan.classifier.num_train_epochs},
                     {"train_batch_size", plan.classifier.train_batch_size},
                     {"max_seq_length", plan.classifier.max_seq_length},
                     {"manual_seed", plan.classifier.manual_seed}};
  return j.dump(2);
}

namespace {

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json augment_report_json(const AugmentReport& r) { return json::parse(r.to_json()); }

AugmentReport augment_report_from_json(const json& j) {
  AugmentReport r;
  r.requested = j.at("requested").get<std::size_t>();
  r.generated = j.at("generated").get<std::size_t>();
  r.rejected_duplicates = j.at("rejected_duplicates").get<std::size_t>();
  r.exhausted_sources = j.at("exhausted_sources").get<std::size_t>();
  r.attempts = j.at("attempts").get<std::size_t>();
  return r;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentPlan& plan) {
  validate_plan(plan);

  EmbeddingTable table =
      plan.embedding_cache
          ? load_embeddings_cached(plan.embedding_path, *plan.embedding_cache)
          : load_embeddings(plan.embedding_path);

  // Per-dataset load/preprocess with failure isolation: a broken file turns
  // into one failure per level, and the rest of the matrix still runs.
  std::vector<std::optional<Dataset>> ready(plan.datasets.size());
  std::vector<std::string> load_errors(plan.datasets.size());
  {
    std::vector<Dataset> ok;
    std::vector<std::size_t> ok_idx;
    for (std::size_t i = 0; i < plan.datasets.size(); ++i) {
      const auto& ref = plan.datasets[i];
      try {
        Dataset d = load_dataset(ref.path, format_from_path(ref.path), ref.name);
        ok.push_back(preprocess_dataset(d, plan.pipeline));
        ok_idx.push_back(i);
      } catch (const std::exception& e) {
        load_errors[i] = e.what();
      }
    }
    std::vector<Dataset> deduped = dedup(ok);
    for (std::size_t k = 0; k < deduped.size(); ++k)
      ready[ok_idx[k]] = merge_train_val(deduped[k]);
  }

  std::filesystem::create_directories(plan.output_dir);
  std::error_code ec;
  std::filesystem::remove_all(plan.output_dir / "runs", ec);  // stale cells would
  std::filesystem::remove(plan.output_dir / "manifest.json", ec);  // break reruns
  for (std::size_t i = 0; i < plan.datasets.size(); ++i)
    if (ready[i])
      std::filesystem::create_directories(plan.output_dir / "runs" / plan.datasets[i].name);

  struct Cell {
    std::size_t dataset;
    std::size_t level;
  };
  std::vector<Cell> cells;
  for (std::size_t di = 0; di < plan.datasets.size(); ++di)
    for (std::size_t li = 0; li < plan.levels.size(); ++li) cells.push_back({di, li});

  std::vector<std::optional<RunResult>> results(cells.size());
  std::vector<std::optional<RunFailure>> failures(cells.size());
  std::mutex log_mutex;

  auto run_cell = [&](std::size_t ci) {
    const auto& [di, li] = cells[ci];
    const auto& ref = plan.datasets[di];
    const double level = plan.levels[li];
    if (!ready[di]) {
      failures[ci] = RunFailure{ref.name, level, load_errors[di]};
      return;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const std::uint64_t cell_seed =
          derive_seed(plan.master_seed, ref.name, format_level(level));
      Dataset d = *ready[di];
      const std::size_t n_train_base = d.count_in_split(Split::train);

      std::optional<AugmentReport> areport;
      if (level > 0.0) {
        AugmentPolicy policy = plan.policy_template;
        policy.increase_pct = level;
        policy.seed = derive_seed(cell_seed, std::string_view("augment"));
        auto [augmented, rep] = augment_class(d, table, policy);
        d = std::move(augmented);
        areport = rep;
      }

      ClassifierConfig cfg = plan.classifier;
      if (plan.auto_size_profile) {
        // profile keyed on the pre-augmentation size so every level of a
        // dataset trains under the same batch/epoch pair
        const ClassifierConfig prof = config_for_dataset_size(n_train_base);
        cfg.train_batch_size = prof.train_batch_size;
        cfg.num_train_epochs = prof.num_train_epochs;
      }
      cfg.manual_seed =
          derive_seed(cell_seed, std::string_view("trainer"), plan.classifier.manual_seed);

      std::vector<Sample> train_split;
      for (const auto& s : d.samples)
        if (d.split(s.id) == Split::train) train_split.push_back(s);
      const TrainedModel model = train(train_split, cfg, table);

      std::vector<Label> preds, gold;
      for (const auto& s : d.samples) {
        if (d.split(s.id) != Split::val) continue;
        gold.push_back(s.label);
        preds.push_back(predict(model, s.text, table).first);
      }
      RunResult rr;
      rr.dataset = ref.name;
      rr.level = level;
      rr.metrics = evaluate(preds, gold);
      rr.augment_report = areport;
      rr.config_fingerprint = model.config_fingerprint;
      rr.seed = cell_seed;
      rr.run_path = "runs/" + ref.name + "/" + format_level(level) + ".json";

      json run;
      run["dataset"] = rr.dataset;
      run["level"] = level_json(level);
      run["seed"] = rr.seed;
      run["config_fingerprint"] = rr.config_fingerprint;
      run["metrics"] = json::parse(to_json(rr.metrics));
      run["augment_report"] =
          areport ? augment_report_json(*areport) : json(nullptr);
      write_text_atomic(plan.output_dir / rr.run_path, run.dump(2) + "\n");

      rr.duration_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::ostringstream line;
        line << "[experiment] " << ref.name << " level " << format_level(level)
             << ": f=" << format_fixed(rr.metrics.f_score, 4)
             << " mcc=" << format_fixed(rr.metrics.mcc, 4) << " ("
             << format_fixed(rr.duration_seconds, 2) << "s)";
        detail::info(line.str());
      }
      results[ci] = std::move(rr);
    } catch (const std::exception& e) {
      failures[ci] = RunFailure{ref.name, level, e.what()};
    }
  };

  const std::size_t n_workers = std::min<std::size_t>(
      static_cast<std::size_t>(plan.threads), cells.size() ? cells.size() : 1);
  if (n_workers <= 1) {
    for (std::size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t ci = next.fetch_add(1);
        if (ci >= cells.size()) return;
        run_cell(ci);
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  ExperimentOutcome outcome;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    if (results[ci]) outcome.results.push_back(*results[ci]);
    if (failures[ci]) outcome.failures.push_back(*failures[ci]);
  }

  json manifest;
  // scheduling and destination are execution details, not experiment content;
  // leaving them out keeps result directories byte-identical across thread
  // counts and output locations
  json plan_block = json::parse(plan_to_json(plan));
  plan_block.erase("output_dir");
  plan_block.erase("threads");
  manifest["plan"] = plan_block;
  json jr = json::array();
  for (const auto& r : outcome.results)
    jr.push_back({{"dataset", r.dataset},
                  {"level", level_json(r.level)},
                  {"run_path", r.run_path},
                  {"seed", r.seed},
                  {"config_fingerprint", r.config_fingerprint}});
  manifest["results"] = jr;
  json jf = json::array();
  for (const auto& f : outcome.failures)
    jf.push_back({{"dataset", f.dataset}, {"level", level_json(f.level)}, {"error", f.error}});
  manifest["failures"] = jf;
  write_text_atomic(plan.output_dir / "manifest.json", manifest.dump(2) + "\n");

  return outcome;
}

std::vector<RunResult> load_results(const std::filesystem::path& results_dir) {
  std::ifstream in(results_dir / "manifest.json", std::ios::binary);
  if (!in)
    throw IoError("cannot open manifest: " + (results_dir / "manifest.json").string());
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw ParseError((results_dir / "manifest.json").string(), 0, e.what());
  }

  std::vector<RunResult> out;
  try {
    for (const auto& entry : manifest.at("results")) {
      const std::string run_path = entry.at("run_path").get<std::string>();
      std::ifstream run_in(results_dir / run_path, std::ios::binary);
      if (!run_in) throw IoError("cannot open run file: " + (results_dir / run_path).string());
      json run;
      try {
        run_in >> run;
      } catch (const json::exception& e) {
        throw ParseError((results_dir / run_path).string(), 0, e.what());
      }
      RunResult rr;
      rr.dataset = run.at("dataset").get<std::string>();
      rr.level = run.at("level").get<double>();
      rr.seed = run.at("seed").get<std::uint64_t>();
      rr.config_fingerprint = run.at("config_fingerprint").get<std::string>();
      rr.metrics = metric_set_from_json(run.at("metrics").dump());
      if (!run.at("augment_report").is_null())
        rr.augment_report = augment_report_from_json(run.at("augment_report"));
      rr.run_path = run_path;
      out.push_back(std::move(rr));
    }
  } catch (const json::exception& e) {
    throw ParseError((results_dir / "manifest.json").string(), 0, e.what());
  }
  return out;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string signed_points(double v) {
  const std::string s = format_fixed(v, 1);
  return (v > 0.0 && s != "0.0") ? "+" + s : s;
}

}  // namespace

std::string emit_report(const std::vector<RunResult>& results, ReportFormat format,
                        bool with_deltas) {
  if (results.empty()) throw ConfigError("emit_report: no results");

  std::vector<std::string> datasets;
  std::vector<double> levels;
  std::map<std::pair<std::string, std::string>, const RunResult*> cell;
  for (const auto& r : results) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end())
      datasets.push_back(r.dataset);
    const std::string lv = format_level(r.level);
    bool seen = false;
    for (double l : levels)
      if (format_level(l) == lv) seen = true;
    if (!seen) levels.push_back(r.level);
    cell[{r.dataset, lv}] = &r;
  }

  const bool has_zero =
      std::find_if(levels.begin(), levels.end(), [](double l) { return l == 0.0; }) !=
      levels.end();
  if (with_deltas && !has_zero)
    throw ConfigError("emit_report: deltas need a level-0 baseline");

  const auto lookup = [&](const std::string& d, double l) -> const RunResult* {
    auto it = cell.find({d, format_level(l)});
    return it == cell.end() ? nullptr : it->second;
  };

  std::ostringstream out;
  if (format == ReportFormat::markdown) {
    const auto metric_table = [&](const std::string& title, auto value_of) {
      out << "## " << title << "\n\n";
      out << "| Dataset |";
      for (double l : levels) out << " " << format_level(l) << "% |";
      out << "\n| --- |";
      for (std::size_t i = 0; i < levels.size(); ++i) out << " --- |";
      out << "\n";
      for (const auto& d : datasets) {
        out << "| " << d << " |";
        for (double l : levels) {
          const RunResult* r = lookup(d, l);
          out << " " << (r ? format_fixed(value_of(*r), 4) : "n/a") << " |";
        }
        out << "\n";
      }
      out << "\n";
    };
    metric_table("F-score", [](const RunResult& r) { return r.metrics.f_score; });
    metric_table("MCC", [](const RunResult& r) { return r.metrics.mcc; });

    if (with_deltas) {
      const auto delta_table = [&](const std::string& title, auto points_of) {
        out << "## " << title << "\n\n";
        out << "| Dataset |";
        for (double l : levels)
          if (l != 0.0) out << " " << format_level(l) << "% |";
        out << "\n| --- |";
        for (double l : levels)
          if (l != 0.0) out << " --- |";
        out << "\n";
        for (const auto& d : datasets) {
          const RunResult* base = lookup(d, 0.0);
          out << "| " << d << " |";
          for (double l : levels) {
            if (l == 0.0) continue;
            const RunResult* r = lookup(d, l);
            if (!base || !r) {
              out << " n/a |";
              continue;
            }
            out << " " << signed_points(points_of(compare_runs(base->metrics, r->metrics)))
                << " |";
          }
          out << "\n";
        }
        out << "\n";
      };
      delta_table("F-score delta vs non-augmented (points)",
                  [](const DeltaReport& d) { return d.f_points; });
      delta_table("MCC delta vs non-augmented (points)",
                  [](const DeltaReport& d) { return d.mcc_points; });
    }
    return out.str();
  }

  // csv
  out << "dataset,level,metric,value\n";
  for (const auto& d : datasets)
    for (double l : levels) {
      const RunResult* r = lookup(d, l);
      if (!r) continue;
      const std::string prefix = csv_quote(d) + "," + format_level(l) + ",";
      out << prefix << "precision," << format_fixed(r->metrics.precision, 4) << "\n";
      out << prefix << "recall," << format_fixed(r->metrics.recall, 4) << "\n";
      out << prefix << "f_score," << format_fixed(r->metrics.f_score, 4) << "\n";
      out << prefix << "mcc," << format_fixed(r->metrics.mcc, 4) << "\n";
    }
  if (with_deltas)
    for (const auto& d : datasets) {
      const RunResult* base = lookup(d, 0.0);
      if (!base) continue;
      for (double l : levels) {
        if (l == 0.0) continue;
        const RunResult* r = lookup(d, l);
        if (!r) continue;
        const DeltaReport delta = compare_runs(base->metrics, r->metrics);
        const std::string prefix = csv_quote(d) + "," + format_level(l) + ",";
        out << prefix << "f_delta_points," << format_fixed(delta.f_points, 1) << "\n";
        out << prefix << "mcc_delta_points," << format_fixed(delta.mcc_points, 1) << "\n";
      }
    }
  return out.str();
}

}  // namespace sarcaug

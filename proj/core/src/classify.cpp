#include "sarcaug/classify.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "sarcaug/errors.hpp"
#include "sarcaug/preprocess.hpp"
#include "sarcaug/rng.hpp"
#include "warn.hpp"

namespace sarcaug {

void validate_classifier_config(const ClassifierConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (cfg.weight_decay < 0.0) throw ConfigError("weight_decay must be >= 0");
  if (cfg.warmup_ratio < 0.0 || cfg.warmup_ratio > 1.0)
    throw ConfigError("warmup_ratio must lie in [0, 1]");
  if (!(cfg.max_grad_norm > 0.0)) throw ConfigError("max_grad_norm must be > 0");
  if (cfg.num_train_epochs < 0) throw ConfigError("num_train_epochs must be >= 0");
  if (cfg.train_batch_size < 1) throw ConfigError("train_batch_size must be >= 1");
  if (cfg.max_seq_length < 1) throw ConfigError("max_seq_length must be >= 1");
}

ClassifierConfig config_for_dataset_size(std::size_t n_train) {
  ClassifierConfig cfg;
  // hashtag-scale corpora (tens of thousands of tweets) get the big-batch
  // short-epoch profile; hand-annotated ones the opposite
  if (n_train > 10000) {
    cfg.train_batch_size = 32;
    cfg.num_train_epochs = 8;
  }
  return cfg;
}

std::vector<double> featurize(std::string_view text, const EmbeddingTable& t,
                              int max_seq_length) {
  std::vector<double> mean(static_cast<std::size_t>(t.dim()), 0.0);
  const std::vector<std::string> tokens = tokenize_ws(text);
  const std::size_t cap =
      std::min<std::size_t>(tokens.size(), static_cast<std::size_t>(max_seq_length));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < cap; ++i) {
    const auto row = t.row_of(tokens[i]);
    if (!row) continue;
    const auto vec = t.row(*row);
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += vec[d];
    ++hits;
  }
  if (hits > 0)
    for (double& v : mean) v /= static_cast<double>(hits);
  return mean;
}

LossGrad bce_loss_and_grad(const std::vector<std::vector<double>>& features,
                           const std::vector<int>& labels,
                           std::span<const double> weights, double bias) {
  if (features.size() != labels.size())
    throw ConfigError("bce_loss_and_grad: feature/label count mismatch");
  if (features.empty()) throw ConfigError("bce_loss_and_grad: empty batch");

  LossGrad out;
  out.grad_w.assign(weights.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& x = features[i];
    if (x.size() != weights.size())
      throw ConfigError("bce_loss_and_grad: feature dimension mismatch");
    double z = bias;
    for (std::size_t d = 0; d < x.size(); ++d) z += weights[d] * x[d];
    const double y = labels[i] ? 1.0 : 0.0;
    // stable BCE: max(z,0) - z*y + log(1 + exp(-|z|))
    out.loss += (std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)))) * inv_n;
    const double p = 1.0 / (1.0 + std::exp(-z));
    const double dz = (p - y) * inv_n;
    for (std::size_t d = 0; d < x.size(); ++d) out.grad_w[d] += dz * x[d];
    out.grad_b += dz;
  }
  return out;
}

double lr_at_step(std::size_t step, std::size_t total_steps, double peak_lr,
                  double warmup_ratio) {
  if (total_steps == 0) return 0.0;
  // snap near-integer products before ceil so e.g. 0.2 * 100 lands on 20,
  // not 21 via a 20.000000000000004 intermediate
  const double raw = warmup_ratio * static_cast<double>(total_steps);
  double snapped = raw;
  if (std::abs(raw - std::round(raw)) < 1e-9) snapped = std::round(raw);
  std::size_t warm = static_cast<std::size_t>(std::ceil(snapped));
  if (warm > total_steps - 1) warm = total_steps - 1;

  if (step < warm) return peak_lr * static_cast<double>(step) / static_cast<double>(warm);
  if (step == warm) return peak_lr;
  const std::size_t last = total_steps - 1;
  if (step >= last) return step == last && warm == last ? peak_lr : 0.0;
  return peak_lr * static_cast<double>(last - step) / static_cast<double>(last - warm);
}

namespace {

std::uint64_t samples_checksum(const std::vector<Sample>& samples) {
  Fnv1a64 h;
  for (const auto& s : samples) {
    h.update(s.id);
    h.update("\x1f");
    h.update(s.text);
    h.update("\x1f");
    h.update(label_token(s.label));
    h.update("\x1e");
  }
  return h.value();
}

}  // namespace

TrainedModel train(const std::vector<Sample>& train_split, const ClassifierConfig& cfg,
                   const EmbeddingTable& t, TrainTrace* trace) {
  validate_classifier_config(cfg);
  if (train_split.empty()) throw ConfigError("train: empty train split");
  std::size_t n_pos = 0;
  for (const auto& s : train_split)
    if (s.label == Label::positive) ++n_pos;
  if (n_pos == 0 || n_pos == train_split.size())
    throw ConfigError("train: training data contains a single class");

  TrainedModel m;
  m.dim = t.dim();
  m.max_seq_length = cfg.max_seq_length;
  m.weights.assign(static_cast<std::size_t>(t.dim()), 0.0);
  m.bias = 0.0;
  m.config_fingerprint = config_fingerprint(cfg, samples_checksum(train_split));

  if (cfg.num_train_epochs == 0) {
    detail::warn("train: num_train_epochs is 0; returning the zero model");
    if (trace) trace->zero_epoch_warning = true;
    return m;
  }

  const std::size_t n = train_split.size();
  std::vector<std::vector<double>> features(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    features[i] = featurize(train_split[i].text, t, cfg.max_seq_length);
    labels[i] = train_split[i].label == Label::positive ? 1 : 0;
  }

  const std::size_t batch = static_cast<std::size_t>(cfg.train_batch_size);
  const std::size_t steps_per_epoch = (n + batch - 1) / batch;
  const std::size_t total_steps =
      static_cast<std::size_t>(cfg.num_train_epochs) * steps_per_epoch;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::size_t step = 0;
  for (int epoch = 0; epoch < cfg.num_train_epochs; ++epoch) {
    SplitMix64 rng(derive_seed(cfg.manual_seed, std::string_view("epoch"),
                               static_cast<std::uint64_t>(epoch)));
    deterministic_shuffle(order, rng);

    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      std::vector<std::vector<double>> bx;
      std::vector<int> by;
      bx.reserve(end - start);
      by.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        bx.push_back(features[order[i]]);
        by.push_back(labels[order[i]]);
      }

      LossGrad lg = bce_loss_and_grad(bx, by, m.weights, m.bias);
      double sq = lg.grad_b * lg.grad_b;
      for (double g : lg.grad_w) sq += g * g;
      const double pre_norm = std::sqrt(sq);
      const double scale =
          pre_norm > cfg.max_grad_norm ? cfg.max_grad_norm / pre_norm : 1.0;
      const double lr = lr_at_step(step, total_steps, cfg.learning_rate, cfg.warmup_ratio);

      for (std::size_t d = 0; d < m.weights.size(); ++d)
        m.weights[d] -= lr * (scale * lg.grad_w[d] + cfg.weight_decay * m.weights[d]);
      m.bias -= lr * scale * lg.grad_b;  // decay never touches the bias

      if (trace) {
        trace->lr.push_back(lr);
        trace->grad_norm_pre_clip.push_back(pre_norm);
        trace->grad_norm_post_clip.push_back(pre_norm * scale);
      }
      ++step;
    }
  }

  for (double w : m.weights)
    if (!std::isfinite(w)) throw Error("train: parameters diverged (non-finite)");
  if (!std::isfinite(m.bias)) throw Error("train: parameters diverged (non-finite)");
  return m;
}

std::pair<Label, double> predict(const TrainedModel& m, std::string_view text,
                                 const EmbeddingTable& t) {
  if (m.dim != t.dim())
    throw ConfigError("predict: model dim " + std::to_string(m.dim) +
                      " does not match table dim " + std::to_string(t.dim()));
  const std::vector<double> x = featurize(text, t, m.max_seq_length);
  double z = m.bias;
  for (std::size_t d = 0; d < x.size(); ++d) z += m.weights[d] * x[d];
  const double score = 1.0 / (1.0 + std::exp(-z));
  return {score >= 0.5 ? Label::positive : Label::negative, score};
}

void save_model(const TrainedModel& m, const std::filesystem::path& path) {
  nlohmann::json j;
  j["dim"] = m.dim;
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  j["max_seq_length"] = m.max_seq_length;
  j["config_fingerprint"] = m.config_fingerprint;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open model file for writing: " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed writing model file: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    TrainedModel m;
    m.dim = j.at("dim").get<int>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.max_seq_length = j.at("max_seq_length").get<int>();
    m.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    if (m.weights.size() != static_cast<std::size_t>(m.dim))
      throw ParseError(path.string(), 0, "weight count does not match dim");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

std::string config_fingerprint(const ClassifierConfig& cfg, std::uint64_t data_checksum) {
  Fnv1a64 h;
  const auto real = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    h.update(bits);
  };
  real(cfg.learning_rate);
  real(cfg.weight_decay);
  real(cfg.warmup_ratio);
  real(cfg.max_grad_norm);
  h.update(static_cast<std::uint64_t>(cfg.num_train_epochs));
  h.update(static_cast<std::uint64_t>(cfg.train_batch_size));
  h.update(static_cast<std::uint64_t>(cfg.max_seq_length));
  h.update(cfg.manual_seed);
  h.update(data_checksum);

  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h.value()));
  return buf;
}

void export_for_external_trainer(const Dataset& d, const std::filesystem::path& dir,
                                 const ExportContext& ctx) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create export directory " + dir.string() + ": " +
                        ec.message());

  const std::pair<Split, const char*> parts[] = {
      {Split::train, "train.jsonl"}, {Split::val, "val.jsonl"}, {Split::test, "test.jsonl"}};
  nlohmann::json counts;
  for (const auto& [split, filename] : parts) {
    Dataset sub;
    sub.name = d.name;
    for (const auto& s : d.samples) {
      if (d.split(s.id) != split) continue;
      sub.samples.push_back(s);
      sub.split_of[s.id] = split;
    }
    counts[std::string(split_token(split))] = sub.samples.size();
    save_dataset(sub, dir / filename, FileFormat::jsonl);
  }

  nlohmann::json manifest;
  manifest["dataset"] = d.name;
  manifest["counts"] = counts;
  manifest["files"] = {{"train", "train.jsonl"}, {"val", "val.jsonl"}, {"test", "test.jsonl"}};
  manifest["config_fingerprint"] = ctx.config_fingerprint;
  manifest["seed"] = ctx.seed;
  manifest["augment_report"] =
      ctx.augment_report ? nlohmann::json::parse(ctx.augment_report->to_json())
                         : nlohmann::json(nullptr);
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw IoError("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << "\n";
  if (!out) throw IoError("failed writing manifest in " + dir.string());
}

}  // namespace sarcaug

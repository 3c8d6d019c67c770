#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sarcaug/augment.hpp"
#include "sarcaug/corpus.hpp"
#include "sarcaug/embeddings.hpp"

namespace sarcaug {

/// Trainer knobs. The defaults are the small-dataset profile (batch 16,
/// 13 epochs); config_for_dataset_size() switches to 32/8 for large corpora.
struct ClassifierConfig {
  double learning_rate = 1e-5;
  double weight_decay = 0.01;
  double warmup_ratio = 0.2;
  double max_grad_norm = 1.0;
  int num_train_epochs = 13;
  int train_batch_size = 16;
  int max_seq_length = 40;
  std::uint64_t manual_seed = 128;
};

void validate_classifier_config(const ClassifierConfig& cfg);

// Datasets above the size cutoff get the batch-32/epoch-8 profile.
ClassifierConfig config_for_dataset_size(std::size_t n_train);

/// Linear model over mean embeddings. Weights are doubles; dim matches the
/// embedding table the model was trained against. max_seq_length is carried
/// along so predict() featurizes exactly as training did.
struct TrainedModel {
  int dim = 0;
  std::vector<double> weights;
  double bias = 0.0;
  int max_seq_length = 40;
  std::string config_fingerprint;
};

/// Mean of the vectors of the first max_seq_length in-vocabulary tokens;
/// zero vector when the text is empty or fully out-of-vocabulary.
std::vector<double> featurize(std::string_view text, const EmbeddingTable& t,
                              int max_seq_length);

/// Mean binary cross-entropy over the batch plus its analytic gradient.
/// Exposed so the finite-difference check can target exactly what the
/// trainer differentiates.
struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
};
LossGrad bce_loss_and_grad(const std::vector<std::vector<double>>& features,
                           const std::vector<int>& labels,
                           std::span<const double> weights, double bias);

/// Per-step rate: linear warmup from 0 to peak at step ceil(warmup_ratio *
/// total_steps), then linear decay to 0 at the final step.
double lr_at_step(std::size_t step, std::size_t total_steps, double peak_lr,
                  double warmup_ratio);

/// Optional per-step trace for schedule/clipping checks.
struct TrainTrace {
  std::vector<double> lr;
  std::vector<double> grad_norm_pre_clip;
  std::vector<double> grad_norm_post_clip;
  bool zero_epoch_warning = false;
};

/// Mini-batch gradient descent on BCE with linear warmup/decay, decoupled
/// weight decay, gradient-norm clipping, and a seeded per-epoch shuffle.
/// Parameters start at zero; training is a single deterministic stream.
/// Throws ConfigError when the train split is empty or single-class; zero
/// epochs returns the zero model with a warning.
TrainedModel train(const std::vector<Sample>& train_split, const ClassifierConfig& cfg,
                   const EmbeddingTable& t, TrainTrace* trace = nullptr);

/// score = sigmoid(w . featurize(text) + b); label positive iff score >= 0.5.
std::pair<Label, double> predict(const TrainedModel& m, std::string_view text,
                                 const EmbeddingTable& t);

void save_model(const TrainedModel& m, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

// Fingerprint over config fields plus the training-data checksum.
std::string config_fingerprint(const ClassifierConfig& cfg, std::uint64_t data_checksum);

/// Extra provenance recorded in the export manifest.
struct ExportContext {
  std::optional<AugmentReport> augment_report;
  std::string config_fingerprint;
  std::uint64_t seed = 0;
};

/// Writes train/val/test JSONL in the corpus schema plus manifest.json so an
/// external fine-tuning job can reproduce the run. Byte-deterministic.
void export_for_external_trainer(const Dataset& d, const std::filesystem::path& dir,
                                 const ExportContext& ctx = {});

}  // namespace sarcaug

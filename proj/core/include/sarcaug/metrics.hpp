#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sarcaug/corpus.hpp"

namespace sarcaug {

struct ConfusionMatrix {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

/// Tallies predictions against gold labels with `positive` as the positive
/// class. Throws on length mismatch or empty input.
ConfusionMatrix confusion(const std::vector<Label>& predictions,
                          const std::vector<Label>& gold,
                          Label positive = Label::positive);

/// 2tp / (2tp + fp + fn); 0 with the degenerate flag set when the
/// denominator vanishes.
double f_score(const ConfusionMatrix& cm, bool* degenerate = nullptr);

/// (tp*tn - fp*fn) / sqrt((tp+fp)(tp+fn)(tn+fp)(tn+fn)). The denominator is
/// split into two square roots so the products stay exactly representable.
/// 0 with the degenerate flag set when any factor is zero.
double mcc(const ConfusionMatrix& cm, bool* degenerate = nullptr);

// Macro variant (mean of the per-class F1s); the default reporting path uses
// the positive-class score.
double f_score_macro(const ConfusionMatrix& cm);

struct MetricSet {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double mcc = 0.0;
  ConfusionMatrix cm;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f_degenerate = false;
  bool mcc_degenerate = false;
};

MetricSet compute_metrics(const ConfusionMatrix& cm);
MetricSet evaluate(const std::vector<Label>& predictions, const std::vector<Label>& gold);

/// Deltas between a baseline and a treated run: f/mcc as absolute points
/// (x100, 1 decimal, half-up), confusion cells as relative percentage change
/// (2 decimals), undefined when the baseline cell is zero.
struct DeltaReport {
  double f_points = 0.0;
  double mcc_points = 0.0;
  std::optional<double> tp_rel_pct, tn_rel_pct, fp_rel_pct, fn_rel_pct;
};

DeltaReport compare_runs(const MetricSet& baseline, const MetricSet& treated);

// Fixed-key JSON / CSV emitters. Undefined relative deltas serialize as null
// in JSON and "n/a" in CSV.
std::string to_json(const MetricSet& m);
std::string to_json(const DeltaReport& d);
std::string to_csv(const MetricSet& m);
std::string to_csv(const DeltaReport& d);
MetricSet metric_set_from_json(const std::string& text);

}  // namespace sarcaug

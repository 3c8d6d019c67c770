#include "sarcaug/metrics.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sarcaug/errors.hpp"
#include "sarcaug/numeric.hpp"

namespace sarcaug {

ConfusionMatrix confusion(const std::vector<Label>& pred, const std::vector<Label>& gold,
                          Label positive) {
  if (pred.size() != gold.size())
    throw ConfigError("confusion: prediction/gold size mismatch");
  if (pred.empty()) throw ConfigError("confusion: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == positive;
    const bool g = gold[i] == positive;
    if (p && g)
      ++cm.tp;
    else if (!p && !g)
      ++cm.tn;
    else if (p && !g)
      ++cm.fp;
    else
      ++cm.fn;
  }
  return cm;
}

double f_score(const ConfusionMatrix& cm, bool* degenerate) {
  const std::uint64_t denom = 2 * cm.tp + cm.fp + cm.fn;
  if (denom == 0) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  if (degenerate) *degenerate = false;
  return 2.0 * static_cast<double>(cm.tp) / static_cast<double>(denom);
}

double mcc(const ConfusionMatrix& cm, bool* degenerate) {
  const double tp = static_cast<double>(cm.tp);
  const double tn = static_cast<double>(cm.tn);
  const double fp = static_cast<double>(cm.fp);
  const double fn = static_cast<double>(cm.fn);
  const double a = (tp + fp) * (tp + fn);
  const double b = (tn + fp) * (tn + fn);
  if (a == 0.0 || b == 0.0) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  if (degenerate) *degenerate = false;
  // factored as sqrt(a)*sqrt(b) so the intermediate products stay well
  // inside exact double range even for counts in the hundreds of millions
  return (tp * tn - fp * fn) / (std::sqrt(a) * std::sqrt(b));
}

double f_score_macro(const ConfusionMatrix& cm) {
  // per-class F over {positive, negative}; the negative class swaps roles
  ConfusionMatrix flipped{cm.tn, cm.tp, cm.fn, cm.fp};
  return (f_score(cm) + f_score(flipped)) / 2.0;
}

MetricSet compute_metrics(const ConfusionMatrix& cm) {
  MetricSet m;
  m.cm = cm;
  const std::uint64_t pd = cm.tp + cm.fp;
  const std::uint64_t rd = cm.tp + cm.fn;
  m.precision_degenerate = pd == 0;
  m.recall_degenerate = rd == 0;
  m.precision = pd ? static_cast<double>(cm.tp) / static_cast<double>(pd) : 0.0;
  m.recall = rd ? static_cast<double>(cm.tp) / static_cast<double>(rd) : 0.0;
  m.f_score = f_score(cm, &m.f_degenerate);
  m.mcc = mcc(cm, &m.mcc_degenerate);
  return m;
}

MetricSet evaluate(const std::vector<Label>& pred, const std::vector<Label>& gold) {
  return compute_metrics(confusion(pred, gold));
}

DeltaReport compare_runs(const MetricSet& baseline, const MetricSet& treated) {
  DeltaReport d;
  d.f_points = round_half_up((treated.f_score - baseline.f_score) * 100.0, 1);
  d.mcc_points = round_half_up((treated.mcc - baseline.mcc) * 100.0, 1);
  const auto rel = [](std::uint64_t b, std::uint64_t t) -> std::optional<double> {
    if (b == 0) return std::nullopt;
    return round_half_up((static_cast<double>(t) - static_cast<double>(b)) /
                             static_cast<double>(b) * 100.0,
                         2);
  };
  d.tp_rel_pct = rel(baseline.cm.tp, treated.cm.tp);
  d.tn_rel_pct = rel(baseline.cm.tn, treated.cm.tn);
  d.fp_rel_pct = rel(baseline.cm.fp, treated.cm.fp);
  d.fn_rel_pct = rel(baseline.cm.fn, treated.cm.fn);
  return d;
}

std::string to_json(const MetricSet& m) {
  nlohmann::json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f_score"] = m.f_score;
  j["mcc"] = m.mcc;
  j["tp"] = m.cm.tp;
  j["tn"] = m.cm.tn;
  j["fp"] = m.cm.fp;
  j["fn"] = m.cm.fn;
  nlohmann::json deg = nlohmann::json::array();
  if (m.precision_degenerate) deg.push_back("precision");
  if (m.recall_degenerate) deg.push_back("recall");
  if (m.f_degenerate) deg.push_back("f_score");
  if (m.mcc_degenerate) deg.push_back("mcc");
  j["degenerate"] = deg;
  return j.dump();
}

MetricSet metric_set_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("<metrics-json>", 0, e.what());
  }
  MetricSet m;
  try {
    m.precision = j.at("precision").get<double>();
    m.recall = j.at("recall").get<double>();
    m.f_score = j.at("f_score").get<double>();
    m.mcc = j.at("mcc").get<double>();
    m.cm.tp = j.at("tp").get<std::uint64_t>();
    m.cm.tn = j.at("tn").get<std::uint64_t>();
    m.cm.fp = j.at("fp").get<std::uint64_t>();
    m.cm.fn = j.at("fn").get<std::uint64_t>();
    if (j.contains("degenerate"))
      for (const auto& d : j.at("degenerate")) {
        const std::string name = d.get<std::string>();
        if (name == "precision") m.precision_degenerate = true;
        if (name == "recall") m.recall_degenerate = true;
        if (name == "f_score") m.f_degenerate = true;
        if (name == "mcc") m.mcc_degenerate = true;
      }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("<metrics-json>", 0, e.what());
  }
  return m;
}

std::string to_csv(const MetricSet& m) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "precision," << format_fixed(m.precision, 4) << "\n";
  out << "recall," << format_fixed(m.recall, 4) << "\n";
  out << "f_score," << format_fixed(m.f_score, 4) << "\n";
  out << "mcc," << format_fixed(m.mcc, 4) << "\n";
  out << "tp," << m.cm.tp << "\n";
  out << "tn," << m.cm.tn << "\n";
  out << "fp," << m.cm.fp << "\n";
  out << "fn," << m.cm.fn << "\n";
  return out.str();
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::string opt_csv(const std::optional<double>& v) {
  if (!v) return "n/a";
  return format_fixed(*v, 2);
}

}  // namespace

std::string to_json(const DeltaReport& d) {
  nlohmann::json j;
  j["f_points"] = d.f_points;
  j["mcc_points"] = d.mcc_points;
  j["tp_rel_pct"] = opt_json(d.tp_rel_pct);
  j["tn_rel_pct"] = opt_json(d.tn_rel_pct);
  j["fp_rel_pct"] = opt_json(d.fp_rel_pct);
  j["fn_rel_pct"] = opt_json(d.fn_rel_pct);
  return j.dump();
}

std::string to_csv(const DeltaReport& d) {
  std::ostringstream out;
  out << "metric,delta\n";
  out << "f_points," << format_fixed(d.f_points, 1) << "\n";
  out << "mcc_points," << format_fixed(d.mcc_points, 1) << "\n";
  out << "tp_rel_pct," << opt_csv(d.tp_rel_pct) << "\n";
  out << "tn_rel_pct," << opt_csv(d.tn_rel_pct) << "\n";
  out << "fp_rel_pct," << opt_csv(d.fp_rel_pct) << "\n";
  out << "fn_rel_pct," << opt_csv(d.fn_rel_pct) << "\n";
  return out.str();
}

}  // namespace sarcaug

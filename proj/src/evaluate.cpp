#include "atomnli/evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <map>
#include <sstream>

#include "atomnli/aggregate.hpp"
#include "atomnli/kernels.hpp"

namespace atomnli {

long long& ConfusionMatrix::at(Label gold, Label predicted) {
  return counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
}

long long ConfusionMatrix::at(Label gold, Label predicted) const {
  return counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
}

long long ConfusionMatrix::total() const {
  long long sum = 0;
  for (const auto& row : counts) {
    for (long long count : row) sum += count;
  }
  return sum;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (std::size_t g = 0; g < 3; ++g) {
    for (std::size_t p = 0; p < 3; ++p) counts[g][p] += other.counts[g][p];
  }
  return *this;
}

ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> pred) {
  if (gold.size() != pred.size()) {
    throw InvalidInput("confusion: " + std::to_string(gold.size()) + " gold labels vs " +
                       std::to_string(pred.size()) + " predictions");
  }
  if (gold.empty()) throw InvalidInput("confusion: empty input");
  ConfusionMatrix matrix;
  for (std::size_t i = 0; i < gold.size(); ++i) ++matrix.at(gold[i], pred[i]);
  return matrix;
}

ClassMetrics class_metrics(const ConfusionMatrix& matrix, Label c) {
  if (matrix.total() == 0) throw InvalidInput("class_metrics: empty confusion matrix");
  const long long tp = matrix.at(c, c);
  long long fp = 0;
  long long fn = 0;
  for (Label other : kAllLabels) {
    if (other == c) continue;
    fp += matrix.at(other, c);
    fn += matrix.at(c, other);
  }
  ClassMetrics metrics;
  metrics.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  metrics.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  const double pr = metrics.precision + metrics.recall;
  metrics.f1 = pr > 0.0 ? 2.0 * metrics.precision * metrics.recall / pr : 0.0;
  return metrics;
}

std::string_view to_string(EvalMode mode) {
  switch (mode) {
    case EvalMode::strict: return "strict";
    case EvalMode::sum: return "sum";
    case EvalMode::sentence: return "sentence";
  }
  return "strict";
}

EvalMode parse_eval_mode(std::string_view text) {
  if (text == "strict") return EvalMode::strict;
  if (text == "sum") return EvalMode::sum;
  if (text == "sentence") return EvalMode::sentence;
  throw InvalidInput("unknown eval mode: \"" + std::string(text) + "\"");
}

namespace {

StratumReport finish_stratum(int atom_count, bool folded, const ConfusionMatrix& matrix) {
  StratumReport report;
  report.atom_count = atom_count;
  report.folded = folded;
  report.matrix = matrix;
  report.support = matrix.total();
  for (Label label : kAllLabels) report.correct += matrix.at(label, label);
  report.accuracy =
      report.support > 0 ? static_cast<double>(report.correct) / static_cast<double>(report.support)
                         : 0.0;
  for (Label label : kAllLabels) {
    report.per_class[static_cast<std::size_t>(label)] = class_metrics(matrix, label);
  }
  return report;
}

std::vector<Label> predict(std::span<const SentenceInstance> test, const Classifier& classifier,
                           EvalMode mode, int workers) {
  std::vector<Label> predictions(test.size());

  if (mode == EvalMode::sentence) {
    std::vector<PremiseClaim> pairs;
    pairs.reserve(test.size());
    for (const SentenceInstance& instance : test) {
      pairs.push_back(PremiseClaim{instance.premise, instance.hypothesis});
    }
    const std::vector<LabelDistribution> dists = classify_pairs(classifier, pairs, workers);
    for (std::size_t i = 0; i < test.size(); ++i) predictions[i] = argmax_label(dists[i]);
    return predictions;
  }

  std::vector<PremiseClaim> pairs;
  std::vector<std::size_t> offsets(test.size() + 1, 0);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const SentenceInstance& instance = test[i];
    if (instance.atoms.empty()) {
      throw InvalidInput("eval: instance " + instance.id + " has no atoms");
    }
    for (const AtomicFact& atom : instance.atoms) {
      pairs.push_back(PremiseClaim{instance.premise, atom.text});
    }
    offsets[i + 1] = pairs.size();
  }

  const std::vector<LabelDistribution> dists = classify_pairs(classifier, pairs, workers);

  for (std::size_t i = 0; i < test.size(); ++i) {
    const std::span<const LabelDistribution> atom_dists{dists.data() + offsets[i],
                                                        offsets[i + 1] - offsets[i]};
    if (mode == EvalMode::strict) {
      std::vector<Label> labels;
      labels.reserve(atom_dists.size());
      for (const LabelDistribution& dist : atom_dists) labels.push_back(argmax_label(dist));
      predictions[i] = aggregate_strict(labels);
    } else {
      predictions[i] = aggregate_sum(atom_dists).first;
    }
  }
  return predictions;
}

}  // namespace

EvalReport stratified_eval(std::span<const SentenceInstance> test, const Classifier& classifier,
                           EvalMode mode, const EvalOptions& options) {
  if (test.empty()) throw InvalidInput("eval: empty test set");
  if (options.stratum_cap < 1) throw InvalidInput("eval: stratum cap must be >= 1");

  const std::vector<Label> predictions = predict(test, classifier, mode, options.workers);

  std::map<int, ConfusionMatrix> buckets;
  bool saw_above_cap = false;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const int n = static_cast<int>(test[i].atoms.size());
    if (n > options.stratum_cap) saw_above_cap = true;
    const int bucket = std::min(n, options.stratum_cap);
    ++buckets[bucket].at(test[i].gold, predictions[i]);
  }

  EvalReport report;
  report.mode = mode;
  ConfusionMatrix overall;
  for (const auto& [bucket, matrix] : buckets) {
    const bool folded = bucket == options.stratum_cap && saw_above_cap;
    report.strata.push_back(finish_stratum(bucket, folded, matrix));
    overall += matrix;
  }
  report.overall = finish_stratum(-1, false, overall);

  double precision_sum = 0.0;
  double recall_sum = 0.0;
  double f1_sum = 0.0;
  for (const ClassMetrics& metrics : report.overall.per_class) {
    precision_sum += metrics.precision;
    recall_sum += metrics.recall;
    f1_sum += metrics.f1;
  }
  report.macro = ClassMetrics{precision_sum / 3.0, recall_sum / 3.0, f1_sum / 3.0};
  // pooled over classes: TP sums to the correct count, TP+FP and TP+FN both
  // sum to the instance count, so all three micro metrics equal accuracy
  report.micro =
      ClassMetrics{report.overall.accuracy, report.overall.accuracy, report.overall.accuracy};
  return report;
}

ModeComparison compare_modes(std::span<const SentenceInstance> test, const Classifier& classifier,
                             const EvalOptions& options) {
  ModeComparison comparison;
  comparison.strict_report = stratified_eval(test, classifier, EvalMode::strict, options);
  comparison.sum_report = stratified_eval(test, classifier, EvalMode::sum, options);
  comparison.sentence_report = stratified_eval(test, classifier, EvalMode::sentence, options);
  return comparison;
}

namespace {

nlohmann::ordered_json stratum_to_json(const StratumReport& stratum, bool is_overall) {
  nlohmann::ordered_json out;
  if (!is_overall) {
    out["atom_count"] = stratum.atom_count;
    out["folded"] = stratum.folded;
  }
  out["support"] = stratum.support;
  out["correct"] = stratum.correct;
  out["accuracy"] = stratum.accuracy;
  nlohmann::ordered_json confusion_rows = nlohmann::ordered_json::array();
  for (const auto& row : stratum.matrix.counts) {
    confusion_rows.push_back({row[0], row[1], row[2]});
  }
  out["confusion"] = std::move(confusion_rows);
  nlohmann::ordered_json classes;
  for (Label label : kAllLabels) {
    const ClassMetrics& metrics = stratum.per_class[static_cast<std::size_t>(label)];
    classes[std::string(to_string(label))] = {
        {"precision", metrics.precision}, {"recall", metrics.recall}, {"f1", metrics.f1}};
  }
  out["classes"] = std::move(classes);
  return out;
}

std::string format_pct(double value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << std::setw(9) << value * 100.0;
  return out.str();
}

}  // namespace

nlohmann::ordered_json report_to_json(const EvalReport& report) {
  nlohmann::ordered_json out;
  out["schema_version"] = 1;
  out["mode"] = std::string(to_string(report.mode));
  out["strata"] = nlohmann::ordered_json::array();
  for (const StratumReport& stratum : report.strata) {
    out["strata"].push_back(stratum_to_json(stratum, false));
  }
  out["overall"] = stratum_to_json(report.overall, true);
  out["overall"]["macro"] = {{"precision", report.macro.precision},
                             {"recall", report.macro.recall},
                             {"f1", report.macro.f1}};
  out["overall"]["micro"] = {{"precision", report.micro.precision},
                             {"recall", report.micro.recall},
                             {"f1", report.micro.f1}};
  return out;
}

std::string report_to_text(const EvalReport& report) {
  std::ostringstream out;
  out << "mode: " << to_string(report.mode) << "\n";

  std::ostringstream header;
  header << std::left << std::setw(15) << "Category" << std::setw(11) << "Metric";
  for (const StratumReport& stratum : report.strata) {
    std::string name = std::to_string(stratum.atom_count);
    if (stratum.folded) {
      name += "+ Facts";
    } else {
      name += stratum.atom_count == 1 ? " Fact" : " Facts";
    }
    header << std::right << std::setw(10) << name;
  }
  header << std::right << std::setw(10) << "Overall";
  out << header.str() << "\n";

  const char* metric_names[4] = {"Accuracy", "Precision", "Recall", "F1"};
  for (Label label : kAllLabels) {
    std::string category(to_string(label));
    category.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(category.front())));
    for (int m = 0; m < 4; ++m) {
      out << std::left << std::setw(15) << (m == 0 ? category : "") << std::setw(11)
          << metric_names[m];
      const auto pick = [&](const StratumReport& stratum) {
        const ClassMetrics& metrics = stratum.per_class[static_cast<std::size_t>(label)];
        switch (m) {
          case 0: return stratum.accuracy;
          case 1: return metrics.precision;
          case 2: return metrics.recall;
          default: return metrics.f1;
        }
      };
      for (const StratumReport& stratum : report.strata) out << format_pct(pick(stratum)) << " ";
      out << format_pct(pick(report.overall));
      out << "\n";
    }
  }
  out << std::left << std::setw(15) << "" << std::setw(11) << "Support";
  for (const StratumReport& stratum : report.strata) {
    out << std::right << std::setw(9) << stratum.support << " ";
  }
  out << std::right << std::setw(9) << report.overall.support << "\n";
  return out.str();
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "stratum,class,metric,value\n";
  const auto emit = [&](const std::string& stratum_name, const StratumReport& stratum) {
    for (Label label : kAllLabels) {
      const ClassMetrics& metrics = stratum.per_class[static_cast<std::size_t>(label)];
      const std::string cls(to_string(label));
      out << stratum_name << "," << cls << ",accuracy," << stratum.accuracy << "\n";
      out << stratum_name << "," << cls << ",precision," << metrics.precision << "\n";
      out << stratum_name << "," << cls << ",recall," << metrics.recall << "\n";
      out << stratum_name << "," << cls << ",f1," << metrics.f1 << "\n";
    }
  };
  for (const StratumReport& stratum : report.strata) {
    emit(std::to_string(stratum.atom_count) + (stratum.folded ? "+" : ""), stratum);
  }
  emit("overall", report.overall);
  return out.str();
}

nlohmann::ordered_json comparison_to_json(const ModeComparison& comparison) {
  nlohmann::ordered_json out;
  out["schema_version"] = 1;
  out["modes"] = {{"strict", report_to_json(comparison.strict_report)},
                  {"sum", report_to_json(comparison.sum_report)},
                  {"sentence", report_to_json(comparison.sentence_report)}};
  nlohmann::ordered_json deltas = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < comparison.strict_report.strata.size(); ++i) {
    const StratumReport& strict = comparison.strict_report.strata[i];
    const StratumReport& sum = comparison.sum_report.strata[i];
    const StratumReport& sentence = comparison.sentence_report.strata[i];
    deltas.push_back({{"atom_count", strict.atom_count},
                      {"strict_minus_sentence", strict.accuracy - sentence.accuracy},
                      {"sum_minus_sentence", sum.accuracy - sentence.accuracy},
                      {"sum_minus_strict", sum.accuracy - strict.accuracy}});
  }
  out["deltas"] = std::move(deltas);
  out["overall_deltas"] = {
      {"strict_minus_sentence",
       comparison.strict_report.overall.accuracy - comparison.sentence_report.overall.accuracy},
      {"sum_minus_sentence",
       comparison.sum_report.overall.accuracy - comparison.sentence_report.overall.accuracy},
      {"sum_minus_strict",
       comparison.sum_report.overall.accuracy - comparison.strict_report.overall.accuracy}};
  return out;
}

std::string comparison_to_text(const ModeComparison& comparison) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "stratum" << std::right << std::setw(10) << "strict"
      << std::setw(10) << "sum" << std::setw(10) << "sentence" << std::setw(14) << "sum-strict"
      << "\n";
  const auto row = [&](const std::string& name, const StratumReport& strict,
                       const StratumReport& sum, const StratumReport& sentence) {
    out << std::left << std::setw(10) << name << std::right << format_pct(strict.accuracy) << " "
        << format_pct(sum.accuracy) << " " << format_pct(sentence.accuracy) << " "
        << std::setw(13) << std::fixed << std::setprecision(2)
        << (sum.accuracy - strict.accuracy) * 100.0 << "\n";
  };
  for (std::size_t i = 0; i < comparison.strict_report.strata.size(); ++i) {
    const StratumReport& strict = comparison.strict_report.strata[i];
    row(std::to_string(strict.atom_count) + (strict.folded ? "+" : ""), strict,
        comparison.sum_report.strata[i], comparison.sentence_report.strata[i]);
  }
  row("overall", comparison.strict_report.overall, comparison.sum_report.overall,
      comparison.sentence_report.overall);
  return out.str();
}

}  // namespace atomnli

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "atomnli/backends.hpp"
#include "atomnli/core.hpp"
#include "json.hpp"

namespace atomnli {

struct ConfusionMatrix {
  // counts[gold][predicted]
  std::array<std::array<long long, 3>, 3> counts{};

  long long& at(Label gold, Label predicted);
  long long at(Label gold, Label predicted) const;
  long long total() const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

/// Tally gold/pred pairs. Throws on length mismatch or empty input.
ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// One-vs-rest metrics for class c; any zero denominator yields 0.0.
ClassMetrics class_metrics(const ConfusionMatrix& matrix, Label c);

enum class EvalMode { strict, sum, sentence };

std::string_view to_string(EvalMode mode);
EvalMode parse_eval_mode(std::string_view text);

struct StratumReport {
  int atom_count = 0;   // folded bucket carries the cap
  bool folded = false;  // true when counts above the cap were folded in
  long long support = 0;
  long long correct = 0;
  double accuracy = 0.0;
  ConfusionMatrix matrix;
  std::array<ClassMetrics, 3> per_class{};  // indexed by Label
};

struct EvalReport {
  EvalMode mode = EvalMode::strict;
  std::vector<StratumReport> strata;  // ascending atom_count
  StratumReport overall;
  // macro: unweighted mean over classes; micro: pooled counts (equals
  // accuracy for single-label multiclass). Both emitted, labeled.
  ClassMetrics macro;
  ClassMetrics micro;
};

struct EvalOptions {
  int stratum_cap = 8;  // buckets above this fold into the final bucket
  int workers = 1;
};

/// Predict per the mode (strict/sum aggregate atom verdicts; sentence
/// classifies the premise/hypothesis pair directly), bucket by atom count
/// and report per-stratum and overall metrics.
EvalReport stratified_eval(std::span<const SentenceInstance> test, const Classifier& classifier,
                           EvalMode mode, const EvalOptions& options = {});

struct ModeComparison {
  EvalReport strict_report;
  EvalReport sum_report;
  EvalReport sentence_report;
};

/// The three modes over identical inputs.
ModeComparison compare_modes(std::span<const SentenceInstance> test, const Classifier& classifier,
                             const EvalOptions& options = {});

nlohmann::ordered_json report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);
/// stratum,class,metric,value rows; accuracy repeats on each class row.
std::string report_to_csv(const EvalReport& report);

nlohmann::ordered_json comparison_to_json(const ModeComparison& comparison);
std::string comparison_to_text(const ModeComparison& comparison);

}  // namespace atomnli

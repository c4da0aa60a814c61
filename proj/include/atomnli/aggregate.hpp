#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "atomnli/backends.hpp"
#include "atomnli/core.hpp"
#include "json.hpp"

namespace atomnli {

enum class AggregationMode { strict, sum };

std::string_view to_string(AggregationMode mode);
AggregationMode parse_aggregation_mode(std::string_view text);

/// Per-atom explanation attached to the aggregated sentence verdict.
struct Verdict {
  std::string instance_id;
  std::vector<Label> atom_labels;
  std::vector<LabelDistribution> atom_dists;
  Label aggregated = Label::neutral;
  AggregationMode mode = AggregationMode::strict;
  std::optional<ScoreTriple> summed;  // present iff mode == sum
  std::vector<std::string> atom_texts;
};

/// Contradiction if any atom contradicts, else neutral if any atom is
/// neutral, else entailment. Throws InvalidInput on an empty sequence.
Label aggregate_strict(std::span<const Label> labels);

/// Component-wise sum of the distributions (kept unnormalized) and the argmax
/// of that sum. Per component the addends are accumulated in sorted order, so
/// the result is exactly invariant under permutation of the input.
std::pair<Label, ScoreTriple> aggregate_sum(std::span<const LabelDistribution> dists);

/// Classifies every atom against the premise and aggregates per mode.
/// atom_dists follow atom order regardless of worker count; a classifier
/// failure is rethrown as BackendError naming the failing atom index.
Verdict judge(const std::string& premise, std::span<const AtomicFact> atoms,
              const Classifier& classifier, AggregationMode mode, int workers = 1);

nlohmann::ordered_json verdict_to_json(const Verdict& verdict);

}  // namespace atomnli

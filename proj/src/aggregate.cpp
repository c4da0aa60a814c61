#include "atomnli/aggregate.hpp"

#include <algorithm>

#include "atomnli/parallel.hpp"

namespace atomnli {

std::string_view to_string(AggregationMode mode) {
  return mode == AggregationMode::strict ? "strict" : "sum";
}

AggregationMode parse_aggregation_mode(std::string_view text) {
  if (text == "strict") return AggregationMode::strict;
  if (text == "sum") return AggregationMode::sum;
  throw InvalidInput("unknown aggregation mode: \"" + std::string(text) + "\"");
}

Label aggregate_strict(std::span<const Label> labels) {
  if (labels.empty()) throw InvalidInput("aggregate_strict: empty label sequence");
  bool any_neutral = false;
  for (Label label : labels) {
    if (label == Label::contradiction) return Label::contradiction;
    if (label == Label::neutral) any_neutral = true;
  }
  return any_neutral ? Label::neutral : Label::entailment;
}

namespace {

// Sorted accumulation: the sum is a function of the component multiset, so
// permuting the input cannot change even the last bit of the result.
double sorted_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

}  // namespace

std::pair<Label, ScoreTriple> aggregate_sum(std::span<const LabelDistribution> dists) {
  if (dists.empty()) throw InvalidInput("aggregate_sum: empty distribution sequence");
  std::vector<double> e, n, c;
  e.reserve(dists.size());
  n.reserve(dists.size());
  c.reserve(dists.size());
  for (const LabelDistribution& d : dists) {
    e.push_back(d.p_e);
    n.push_back(d.p_n);
    c.push_back(d.p_c);
  }
  ScoreTriple summed{sorted_sum(e), sorted_sum(n), sorted_sum(c)};
  return {argmax_label(summed), summed};
}

Verdict judge(const std::string& premise, std::span<const AtomicFact> atoms,
              const Classifier& classifier, AggregationMode mode, int workers) {
  if (atoms.empty()) throw InvalidInput("judge: no atoms to classify");

  Verdict verdict;
  verdict.mode = mode;
  verdict.instance_id = atoms.front().source_id;
  verdict.atom_dists.resize(atoms.size());
  verdict.atom_texts.reserve(atoms.size());
  for (const AtomicFact& atom : atoms) verdict.atom_texts.push_back(atom.text);

  for_each_index(atoms.size(), workers, [&](std::size_t i) {
    try {
      verdict.atom_dists[i] = classifier.classify(premise, atoms[i].text);
      verdict.atom_dists[i].validate();
    } catch (const std::exception& e) {
      throw BackendError("classifier failed on atom " + std::to_string(i) + ": " + e.what());
    }
  });

  verdict.atom_labels.reserve(atoms.size());
  for (const LabelDistribution& dist : verdict.atom_dists) {
    verdict.atom_labels.push_back(argmax_label(dist));
  }

  if (mode == AggregationMode::strict) {
    verdict.aggregated = aggregate_strict(verdict.atom_labels);
  } else {
    auto [label, summed] = aggregate_sum(verdict.atom_dists);
    verdict.aggregated = label;
    verdict.summed = summed;
  }
  return verdict;
}

nlohmann::ordered_json verdict_to_json(const Verdict& verdict) {
  nlohmann::ordered_json out;
  out["id"] = verdict.instance_id;
  out["mode"] = std::string(to_string(verdict.mode));
  out["atoms"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < verdict.atom_labels.size(); ++i) {
    nlohmann::ordered_json atom;
    atom["text"] = i < verdict.atom_texts.size() ? verdict.atom_texts[i] : "";
    atom["label"] = std::string(to_string(verdict.atom_labels[i]));
    atom["p_e"] = verdict.atom_dists[i].p_e;
    atom["p_n"] = verdict.atom_dists[i].p_n;
    atom["p_c"] = verdict.atom_dists[i].p_c;
    out["atoms"].push_back(std::move(atom));
  }
  out["aggregated"] = std::string(to_string(verdict.aggregated));
  if (verdict.summed) {
    out["summed"] = {{"s_e", verdict.summed->s_e},
                     {"s_n", verdict.summed->s_n},
                     {"s_c", verdict.summed->s_c}};
  } else {
    out["summed"] = nullptr;
  }
  return out;
}

}  // namespace atomnli

#include "atomnli/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "atomnli/parallel.hpp"

namespace atomnli {

std::string_view to_string(SplitName name) {
  switch (name) {
    case SplitName::train: return "train";
    case SplitName::validation: return "validation";
    case SplitName::test: return "test";
  }
  return "train";
}

SplitName parse_split_name(std::string_view text) {
  if (text == "train") return SplitName::train;
  if (text == "validation") return SplitName::validation;
  if (text == "test") return SplitName::test;
  throw InvalidInput("unknown split name: \"" + std::string(text) + "\"");
}

std::vector<AtomCorpus::Entry> AtomCorpus::collect_entries(
    std::span<const SentenceInstance> instances) {
  std::vector<Entry> entries;
  for (const SentenceInstance& instance : instances) {
    for (const AtomicFact& atom : instance.atoms) {
      entries.push_back(Entry{instance.id + "#" + std::to_string(atom.index), instance.id,
                              atom.text});
    }
  }
  if (entries.empty()) throw InvalidInput("atom corpus is empty");
  return entries;
}

namespace {

Bm25Index index_over_entries(const std::vector<AtomCorpus::Entry>& entries, double k1, double b) {
  std::vector<std::pair<std::string, std::string>> docs;
  docs.reserve(entries.size());
  for (const AtomCorpus::Entry& entry : entries) docs.emplace_back(entry.doc_id, entry.text);
  return Bm25Index::build(docs, k1, b);
}

}  // namespace

AtomCorpus::AtomCorpus(std::span<const SentenceInstance> instances, double k1, double b)
    : entries_(collect_entries(instances)), index_(index_over_entries(entries_, k1, b)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) by_id_.emplace(entries_[i].doc_id, i);
}

const AtomCorpus::Entry& AtomCorpus::entry(const std::string& doc_id) const {
  const auto it = by_id_.find(doc_id);
  if (it == by_id_.end()) throw InvalidInput("unknown atom doc id: " + doc_id);
  return entries_[it->second];
}

namespace {

std::string dedup_key(const std::string& premise, const std::string& atom) {
  return normalize_whitespace(premise) + "\x1f" + normalize_whitespace(atom);
}

// direct provenances beat retrieved/generated ones on dedup collisions
int provenance_rank(Provenance provenance) {
  switch (provenance) {
    case Provenance::direct_entailment:
    case Provenance::direct_neutral:
    case Provenance::direct_contradiction: return 0;
    case Provenance::retrieved_neutral:
    case Provenance::generated_contradiction: return 1;
  }
  return 1;
}

std::vector<AtomicInstance> dedup_instances(std::vector<AtomicInstance> instances) {
  std::map<std::string, std::size_t> chosen;
  std::vector<AtomicInstance> out;
  for (AtomicInstance& instance : instances) {
    const std::string key = dedup_key(instance.premise, instance.atom);
    const auto it = chosen.find(key);
    if (it == chosen.end()) {
      chosen.emplace(key, out.size());
      out.push_back(std::move(instance));
    } else if (provenance_rank(instance.provenance) < provenance_rank(out[it->second].provenance)) {
      out[it->second] = std::move(instance);
    }
  }
  return out;
}

LabelDistribution classify_checked(const Classifier& classifier, const std::string& premise,
                                   const std::string& claim, const std::string& instance_id) {
  try {
    LabelDistribution dist = classifier.classify(premise, claim);
    dist.validate();
    return dist;
  } catch (const std::exception& e) {
    throw BackendError("classifier failed on instance " + instance_id + ": " + e.what());
  }
}

std::string atom_instance_id(const std::string& source_id, int atom_index) {
  return source_id + "#" + std::to_string(atom_index);
}

}  // namespace

std::vector<AtomicInstance> build_entailment_pairs(std::span<const SentenceInstance> instances,
                                                   const Classifier& classifier,
                                                   const PipelineConfig& cfg, int workers) {
  for (const SentenceInstance& instance : instances) {
    if (instance.gold != Label::entailment) {
      throw InvalidInput("entailment branch: instance " + instance.id + " has gold label " +
                         std::string(to_string(instance.gold)));
    }
    if (instance.atoms.empty()) {
      throw InvalidInput("entailment branch: instance " + instance.id + " has no atoms");
    }
  }

  std::vector<std::vector<AtomicInstance>> per_instance(instances.size());
  for_each_index(instances.size(), workers, [&](std::size_t i) {
    const SentenceInstance& instance = instances[i];
    for (const AtomicFact& atom : instance.atoms) {
      const LabelDistribution dist =
          classify_checked(classifier, instance.premise, atom.text, instance.id);
      if (dist.p_e > cfg.tau_e) {
        per_instance[i].push_back(AtomicInstance{atom_instance_id(instance.id, atom.index),
                                                 instance.premise, atom.text, Label::entailment,
                                                 Provenance::direct_entailment});
      }
    }
  });

  std::vector<AtomicInstance> out;
  for (auto& chunk : per_instance) {
    out.insert(out.end(), std::make_move_iterator(chunk.begin()),
               std::make_move_iterator(chunk.end()));
  }
  return dedup_instances(std::move(out));
}

std::vector<AtomicInstance> build_neutral_pairs(std::span<const SentenceInstance> instances,
                                                const Classifier& classifier,
                                                const AtomCorpus& corpus,
                                                const PipelineConfig& cfg, int workers) {
  std::vector<std::vector<AtomicInstance>> direct(instances.size());
  std::vector<std::vector<AtomicInstance>> retrieved(instances.size());

  for_each_index(instances.size(), workers, [&](std::size_t i) {
    const SentenceInstance& instance = instances[i];

    if (!cfg.direct_gold_only || instance.gold == Label::neutral) {
      for (const AtomicFact& atom : instance.atoms) {
        const LabelDistribution dist =
            classify_checked(classifier, instance.premise, atom.text, instance.id);
        if (dist.p_n > cfg.tau_n) {
          direct[i].push_back(AtomicInstance{atom_instance_id(instance.id, atom.index),
                                             instance.premise, atom.text, Label::neutral,
                                             Provenance::direct_neutral});
        }
      }
    }

    // retrieval branch: candidates come from other instances only
    const std::vector<SearchHit> hits = corpus.index().query(instance.premise, cfg.retrieval_k);
    std::vector<std::pair<std::string, std::string>> candidates;
    for (const SearchHit& hit : hits) {
      const AtomCorpus::Entry& entry = corpus.entry(hit.doc_id);
      if (entry.source_id == instance.id) continue;
      candidates.emplace_back(entry.doc_id, entry.text);
    }
    const std::vector<RerankHit> survivors =
        rerank_by_neutrality(instance.premise, candidates, classifier, cfg.tau_n);
    for (const RerankHit& survivor : survivors) {
      const AtomCorpus::Entry& entry = corpus.entry(survivor.doc_id);
      retrieved[i].push_back(AtomicInstance{instance.id + "#ret#" + survivor.doc_id,
                                            instance.premise, entry.text, Label::neutral,
                                            Provenance::retrieved_neutral});
    }
  });

  std::vector<AtomicInstance> out;
  for (auto& chunk : direct) {
    out.insert(out.end(), std::make_move_iterator(chunk.begin()),
               std::make_move_iterator(chunk.end()));
  }
  for (auto& chunk : retrieved) {
    out.insert(out.end(), std::make_move_iterator(chunk.begin()),
               std::make_move_iterator(chunk.end()));
  }
  return dedup_instances(std::move(out));
}

std::vector<AtomicInstance> build_contradiction_pairs(
    std::span<const SentenceInstance> instances, const Classifier& classifier,
    const Ensemble& ensemble, const Generator* generator, const PipelineConfig& cfg, int workers,
    std::ostream* log) {
  if (generator != nullptr && ensemble.members.empty()) {
    throw InvalidInput("contradiction branch: generation requires a non-empty ensemble");
  }

  std::vector<std::vector<AtomicInstance>> direct(instances.size());
  std::vector<std::vector<AtomicInstance>> generated(instances.size());
  std::vector<std::vector<std::string>> failures(instances.size());

  for_each_index(instances.size(), workers, [&](std::size_t i) {
    const SentenceInstance& instance = instances[i];
    for (const AtomicFact& atom : instance.atoms) {
      const LabelDistribution dist =
          classify_checked(classifier, instance.premise, atom.text, instance.id);

      if ((!cfg.direct_gold_only || instance.gold == Label::contradiction) &&
          dist.p_c > cfg.tau_c) {
        direct[i].push_back(AtomicInstance{atom_instance_id(instance.id, atom.index),
                                           instance.premise, atom.text, Label::contradiction,
                                           Provenance::direct_contradiction});
      }

      if (generator != nullptr && dist.p_e > cfg.tau_e) {
        std::string candidate;
        try {
          candidate = generator->generate_contradiction(instance.premise, atom.text);
        } catch (const std::exception& e) {
          failures[i].push_back("generation failed for " +
                                atom_instance_id(instance.id, atom.index) + ": " + e.what());
          continue;
        }
        if (normalize_whitespace(to_lower(candidate)) == normalize_whitespace(to_lower(atom.text))) {
          continue;
        }
        if (ensemble_contradiction_check(ensemble, instance.premise, candidate, cfg.tau_c)) {
          generated[i].push_back(
              AtomicInstance{atom_instance_id(instance.id, atom.index) + "#gen",
                             instance.premise, candidate, Label::contradiction,
                             Provenance::generated_contradiction});
        }
      }
    }
  });

  if (log != nullptr) {
    for (const auto& chunk : failures) {
      for (const std::string& message : chunk) *log << message << '\n';
    }
  }

  std::vector<AtomicInstance> out;
  for (auto& chunk : direct) {
    out.insert(out.end(), std::make_move_iterator(chunk.begin()),
               std::make_move_iterator(chunk.end()));
  }
  for (auto& chunk : generated) {
    out.insert(out.end(), std::make_move_iterator(chunk.begin()),
               std::make_move_iterator(chunk.end()));
  }
  return dedup_instances(std::move(out));
}

namespace {

// modulo-rejection draw, stable across standard library implementations
std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % n;
}

void sort_by_premise_atom(std::vector<AtomicInstance>& instances) {
  std::sort(instances.begin(), instances.end(),
            [](const AtomicInstance& a, const AtomicInstance& b) {
              if (a.premise != b.premise) return a.premise < b.premise;
              if (a.atom != b.atom) return a.atom < b.atom;
              return a.id < b.id;
            });
}

std::vector<AtomicInstance> subsample_class(std::vector<AtomicInstance> items, int cap,
                                            std::uint64_t seed, std::uint64_t class_index) {
  if (static_cast<int>(items.size()) <= cap) return items;
  sort_by_premise_atom(items);
  std::seed_seq seq{static_cast<std::uint64_t>(seed), class_index};
  std::mt19937_64 rng(seq);
  // partial Fisher-Yates: the first `cap` slots end up a uniform sample
  for (std::size_t i = 0; i < static_cast<std::size_t>(cap); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded_rand(rng, items.size() - i));
    std::swap(items[i], items[j]);
  }
  items.resize(static_cast<std::size_t>(cap));
  return items;
}

}  // namespace

DatasetSplit assemble(std::span<const AtomicInstance> entail,
                      std::span<const AtomicInstance> neutral,
                      std::span<const AtomicInstance> contra, const PipelineConfig& cfg,
                      SplitName name) {
  std::vector<AtomicInstance> merged;
  merged.reserve(entail.size() + neutral.size() + contra.size());
  merged.insert(merged.end(), entail.begin(), entail.end());
  merged.insert(merged.end(), neutral.begin(), neutral.end());
  merged.insert(merged.end(), contra.begin(), contra.end());
  merged = dedup_instances(std::move(merged));

  std::array<std::vector<AtomicInstance>, 3> by_class;
  for (AtomicInstance& instance : merged) {
    by_class[static_cast<std::size_t>(instance.label)].push_back(std::move(instance));
  }

  DatasetSplit split;
  split.name = name;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    std::vector<AtomicInstance> items = std::move(by_class[c]);
    if (cfg.per_class_cap) {
      items = subsample_class(std::move(items), *cfg.per_class_cap, cfg.seed,
                              static_cast<std::uint64_t>(c));
    }
    split.atomic.insert(split.atomic.end(), std::make_move_iterator(items.begin()),
                        std::make_move_iterator(items.end()));
  }
  sort_by_premise_atom(split.atomic);
  return split;
}

TestBuildResult build_test_split(std::span<const SentenceInstance> instances,
                                 const Decomposer& decomposer, const PipelineConfig& cfg,
                                 int workers) {
  std::vector<std::vector<AtomicFact>> decomposed(instances.size());
  for_each_index(instances.size(), workers, [&](std::size_t i) {
    try {
      decomposed[i] = decomposer.decompose(instances[i].hypothesis, instances[i].id);
    } catch (const std::exception& e) {
      throw BackendError("decompose failed on instance " + instances[i].id + ": " + e.what());
    }
  });

  TestBuildResult result;
  result.split.name = SplitName::test;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    std::vector<AtomicFact>& atoms = decomposed[i];
    bool valid = !atoms.empty() && static_cast<int>(atoms.size()) <= cfg.max_atoms;
    std::set<std::string> seen;
    for (const AtomicFact& atom : atoms) {
      const std::string text = normalize_whitespace(atom.text);
      if (text.empty() || !seen.insert(to_lower(text)).second) valid = false;
    }
    if (!valid) {
      ++result.dropped;
      continue;
    }
    SentenceInstance instance = instances[i];
    instance.atoms = std::move(atoms);
    result.split.grouped.push_back(std::move(instance));
  }
  return result;
}

namespace {

double round2(double value) {
  return std::round(value * 100.0) / 100.0;
}

}  // namespace

SplitStats stats(const DatasetSplit& split) {
  SplitStats out;
  out.split = std::string(to_string(split.name));

  std::set<std::string> premises;
  long long text_chars = 0;

  if (split.name == SplitName::test) {
    if (split.grouped.empty()) throw InvalidInput("stats: empty split");
    for (const SentenceInstance& instance : split.grouped) {
      ++out.per_class[static_cast<std::size_t>(instance.gold)];
      premises.insert(instance.premise);
      text_chars += static_cast<long long>(codepoint_count(instance.hypothesis));
      ++out.atom_histogram[static_cast<int>(instance.atoms.size())];
    }
    out.total = static_cast<long long>(split.grouped.size());
  } else {
    if (split.atomic.empty()) throw InvalidInput("stats: empty split");
    for (const AtomicInstance& instance : split.atomic) {
      ++out.per_class[static_cast<std::size_t>(instance.label)];
      premises.insert(instance.premise);
      text_chars += static_cast<long long>(codepoint_count(instance.atom));
    }
    out.total = static_cast<long long>(split.atomic.size());
  }

  out.unique_premises = static_cast<long long>(premises.size());
  out.avg_hypothesis_length =
      round2(static_cast<double>(text_chars) / static_cast<double>(out.total));
  out.premise_use =
      round2(static_cast<double>(out.total) / static_cast<double>(out.unique_premises));
  return out;
}

nlohmann::ordered_json stats_to_json(const SplitStats& stats) {
  nlohmann::ordered_json out;
  out["split"] = stats.split;
  out["total"] = stats.total;
  out["classes"] = {{"entailment", stats.per_class[0]},
                    {"neutral", stats.per_class[1]},
                    {"contradiction", stats.per_class[2]}};
  out["unique_premises"] = stats.unique_premises;
  out["avg_hypothesis_length"] = stats.avg_hypothesis_length;
  out["premise_use"] = stats.premise_use;
  if (!stats.atom_histogram.empty()) {
    nlohmann::ordered_json histogram = nlohmann::ordered_json::object();
    for (const auto& [atoms, count] : stats.atom_histogram) {
      histogram[std::to_string(atoms)] = count;
    }
    out["atom_histogram"] = std::move(histogram);
  }
  return out;
}

}  // namespace atomnli

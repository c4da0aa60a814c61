#pragma once

#include <array>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "atomnli/backends.hpp"
#include "atomnli/core.hpp"
#include "atomnli/retrieval.hpp"
#include "json.hpp"

namespace atomnli {

enum class SplitName { train, validation, test };

std::string_view to_string(SplitName name);
SplitName parse_split_name(std::string_view text);

/// Train/validation splits carry atomic triplets; the test split keeps the
/// grouped (premise, atoms, gold) form.
struct DatasetSplit {
  SplitName name = SplitName::train;
  std::vector<AtomicInstance> atomic;
  std::vector<SentenceInstance> grouped;
};

struct SplitStats {
  std::string split;
  std::array<long long, 3> per_class{};  // indexed by Label
  long long total = 0;
  long long unique_premises = 0;
  double avg_hypothesis_length = 0.0;  // mean character count, 2 decimals
  double premise_use = 0.0;            // instances / unique premises, 2 decimals
  std::map<int, long long> atom_histogram;  // grouped splits only
};

/// All atoms of a corpus plus a BM25 index over them. Doc ids are
/// "<source_id>#<atom index>", so every posting can be traced back to the
/// instance it came from.
class AtomCorpus {
public:
  struct Entry {
    std::string doc_id;
    std::string source_id;
    std::string text;
  };

  AtomCorpus(std::span<const SentenceInstance> instances, double k1, double b);

  const Bm25Index& index() const { return index_; }
  const Entry& entry(const std::string& doc_id) const;
  std::size_t size() const { return entries_.size(); }

private:
  static std::vector<Entry> collect_entries(std::span<const SentenceInstance> instances);

  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> by_id_;
  Bm25Index index_;
};

/// Direct entailment pairs: gold-entailment atoms kept when p_e > tau_e.
std::vector<AtomicInstance> build_entailment_pairs(std::span<const SentenceInstance> instances,
                                                   const Classifier& classifier,
                                                   const PipelineConfig& cfg, int workers = 1);

/// Neutral pairs from the direct branch (p_n > tau_n) plus BM25 retrieval
/// and neutrality reranking over atoms from other instances. Deduplicated on
/// (premise, atom text).
std::vector<AtomicInstance> build_neutral_pairs(std::span<const SentenceInstance> instances,
                                                const Classifier& classifier,
                                                const AtomCorpus& corpus,
                                                const PipelineConfig& cfg, int workers = 1);

/// Direct contradictions (p_c > tau_c) plus generated minimal edits kept only
/// when the whole ensemble calls them contradictions. Pass a null generator
/// to disable the generation branch. Generation failures are logged to `log`
/// (when given) and skipped; classifier failures propagate.
std::vector<AtomicInstance> build_contradiction_pairs(
    std::span<const SentenceInstance> instances, const Classifier& classifier,
    const Ensemble& ensemble, const Generator* generator, const PipelineConfig& cfg,
    int workers = 1, std::ostream* log = nullptr);

/// Merge the three branches into one split: global dedup on (premise, atom)
/// with direct provenances winning, optional per-class uniform subsample
/// driven by cfg.seed, output sorted by (premise, atom).
DatasetSplit assemble(std::span<const AtomicInstance> entail,
                      std::span<const AtomicInstance> neutral,
                      std::span<const AtomicInstance> contra, const PipelineConfig& cfg,
                      SplitName name = SplitName::train);

struct TestBuildResult {
  DatasetSplit split;
  long long dropped = 0;  // instances whose decomposition came back invalid
};

/// Decompose every hypothesis, keep gold labels unchanged, drop instances
/// whose decomposition is empty, duplicated or longer than cfg.max_atoms.
TestBuildResult build_test_split(std::span<const SentenceInstance> instances,
                                 const Decomposer& decomposer, const PipelineConfig& cfg,
                                 int workers = 1);

SplitStats stats(const DatasetSplit& split);

nlohmann::ordered_json stats_to_json(const SplitStats& stats);

}  // namespace atomnli

#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "atomnli/backends.hpp"
#include "atomnli/core.hpp"

namespace atomnli {

struct SearchHit {
  std::string doc_id;
  double score = 0.0;
};

/// Okapi BM25 over tokenized documents, +1-inside-log IDF so scores are never
/// negative. Immutable once built; queries are safe to run concurrently.
class Bm25Index {
public:
  /// Tokenization: lowercase, split on non-alphanumeric runs. Throws on an
  /// empty corpus or duplicate doc ids.
  static Bm25Index build(std::span<const std::pair<std::string, std::string>> docs,
                         double k1 = 1.2, double b = 0.75);

  /// Top-k by score; zero-score documents excluded; ties broken by doc_id
  /// ascending. Query terms are deduplicated in first-occurrence order.
  std::vector<SearchHit> query(const std::string& text, int k) const;

  std::size_t size() const { return ids_.size(); }
  double avgdl() const { return avgdl_; }
  double k1() const { return k1_; }
  double b() const { return b_; }
  int doc_freq(const std::string& term) const;
  int term_frequency(const std::string& doc_id, const std::string& term) const;
  int doc_length(const std::string& doc_id) const;

  /// JSON file with a format/version tag; load rebuilds the statistics, so
  /// queries after a round-trip match the original index exactly.
  void save(const std::string& path) const;
  static Bm25Index load(const std::string& path);

private:
  Bm25Index() = default;

  std::vector<std::string> ids_;
  std::vector<std::string> texts_;
  std::vector<int> doc_len_;
  double avgdl_ = 0.0;
  double k1_ = 1.2;
  double b_ = 0.75;
  // term -> (doc ordinal, term frequency), ordinals ascending
  std::unordered_map<std::string, std::vector<std::pair<int, int>>> postings_;
  std::unordered_map<std::string, int> id_to_ordinal_;
};

struct RerankHit {
  std::string doc_id;
  double p_n = 0.0;
};

/// Scores each (premise, candidate text) pair with the classifier, keeps
/// candidates with p_n > tau_n and sorts them by p_n descending, ties by
/// doc_id ascending.
std::vector<RerankHit> rerank_by_neutrality(
    const std::string& premise, std::span<const std::pair<std::string, std::string>> candidates,
    const Classifier& classifier, double tau_n, int workers = 1);

}  // namespace atomnli

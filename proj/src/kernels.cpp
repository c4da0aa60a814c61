#include "atomnli/kernels.hpp"

#include "atomnli/parallel.hpp"

namespace atomnli {

std::vector<LabelDistribution> classify_pairs_serial(const Classifier& classifier,
                                                     std::span<const PremiseClaim> pairs) {
  std::vector<LabelDistribution> out = classifier.classify_batch(pairs);
  if (out.size() != pairs.size()) {
    throw BackendError(classifier.name() + ": batch returned " + std::to_string(out.size()) +
                       " results for " + std::to_string(pairs.size()) + " pairs");
  }
  for (const LabelDistribution& dist : out) dist.validate();
  return out;
}

std::vector<LabelDistribution> classify_pairs_parallel(const Classifier& classifier,
                                                       std::span<const PremiseClaim> pairs,
                                                       int workers) {
  std::vector<LabelDistribution> out(pairs.size());
  for_each_index_parallel(pairs.size(), workers, [&](std::size_t i) {
    out[i] = classifier.classify(pairs[i].premise, pairs[i].claim);
    out[i].validate();
  });
  return out;
}

std::vector<LabelDistribution> classify_pairs(const Classifier& classifier,
                                              std::span<const PremiseClaim> pairs, int workers) {
  if (workers > 1) return classify_pairs_parallel(classifier, pairs, workers);
  return classify_pairs_serial(classifier, pairs);
}

std::vector<std::vector<SearchHit>> bm25_query_many_serial(const Bm25Index& index,
                                                           std::span<const std::string> queries,
                                                           int k) {
  std::vector<std::vector<SearchHit>> out;
  out.reserve(queries.size());
  for (const std::string& query : queries) out.push_back(index.query(query, k));
  return out;
}

std::vector<std::vector<SearchHit>> bm25_query_many_parallel(const Bm25Index& index,
                                                             std::span<const std::string> queries,
                                                             int k, int workers) {
  std::vector<std::vector<SearchHit>> out(queries.size());
  for_each_index_parallel(queries.size(), workers,
                          [&](std::size_t i) { out[i] = index.query(queries[i], k); });
  return out;
}

std::vector<std::vector<SearchHit>> bm25_query_many(const Bm25Index& index,
                                                    std::span<const std::string> queries, int k,
                                                    int workers) {
  if (workers > 1) return bm25_query_many_parallel(index, queries, k, workers);
  return bm25_query_many_serial(index, queries, k);
}

}  // namespace atomnli

#pragma once

#include <span>
#include <string>
#include <vector>

#include "atomnli/backends.hpp"
#include "atomnli/core.hpp"
#include "atomnli/retrieval.hpp"

namespace atomnli {

// Data-parallel kernels. Each comes in two flavours: a serial reference and
// an OpenMP version. For deterministic backends both produce identical
// output; the test suite and the bench tool compare them.

/// Serial reference: delegates to the classifier's own batch path.
std::vector<LabelDistribution> classify_pairs_serial(const Classifier& classifier,
                                                     std::span<const PremiseClaim> pairs);

/// OpenMP fan-out of single-pair calls, results written in pair order.
std::vector<LabelDistribution> classify_pairs_parallel(const Classifier& classifier,
                                                       std::span<const PremiseClaim> pairs,
                                                       int workers);

/// Dispatch on worker count (<= 1 means serial).
std::vector<LabelDistribution> classify_pairs(const Classifier& classifier,
                                              std::span<const PremiseClaim> pairs, int workers);

std::vector<std::vector<SearchHit>> bm25_query_many_serial(const Bm25Index& index,
                                                           std::span<const std::string> queries,
                                                           int k);

std::vector<std::vector<SearchHit>> bm25_query_many_parallel(const Bm25Index& index,
                                                             std::span<const std::string> queries,
                                                             int k, int workers);

std::vector<std::vector<SearchHit>> bm25_query_many(const Bm25Index& index,
                                                    std::span<const std::string> queries, int k,
                                                    int workers);

}  // namespace atomnli

// Serial reference vs OpenMP kernels: outputs must be identical, and whole
// pipeline stages must not depend on the worker count.

#include <atomic>

#include "atomnli/construct.hpp"
#include "atomnli/evaluate.hpp"
#include "atomnli/kernels.hpp"
#include "atomnli/parallel.hpp"
#include "doctest.h"
#include "fixture.hpp"

using namespace atomnli;

namespace {

bool same_dist(const LabelDistribution& a, const LabelDistribution& b) {
  return a.p_e == b.p_e && a.p_n == b.p_n && a.p_c == b.p_c;
}

std::vector<PremiseClaim> synth_pairs(std::size_t count) {
  const auto instances = fixture::instances();
  std::vector<PremiseClaim> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    const SentenceInstance& instance = instances[i % instances.size()];
    pairs.push_back(
        PremiseClaim{instance.premise, instance.atoms[i % instance.atoms.size()].text});
  }
  return pairs;
}

}  // namespace

TEST_CASE("for_each_index runs every index exactly once") {
  for (int workers : {1, 2, 8}) {
    std::vector<std::atomic<int>> hits(257);
    for_each_index(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (const auto& hit : hits) CHECK(hit.load() == 1);
  }
}

TEST_CASE("parallel exceptions surface the lowest failing index") {
  for (int workers : {1, 4}) {
    try {
      for_each_index(100, workers, [&](std::size_t i) {
        if (i == 7 || i == 93) throw InvalidInput("bad index " + std::to_string(i));
      });
      FAIL("expected a throw");
    } catch (const InvalidInput& e) {
      CHECK(std::string(e.what()) == "bad index 7");
    }
  }
}

TEST_CASE("classifier fan-out kernels agree with the serial reference") {
  const auto classifier = stub_classifier();
  const std::vector<PremiseClaim> pairs = synth_pairs(1000);

  const auto serial = classify_pairs_serial(*classifier, pairs);
  for (int workers : {2, 4, 8}) {
    const auto parallel = classify_pairs_parallel(*classifier, pairs, workers);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(same_dist(serial[i], parallel[i]));
    }
  }
  // dispatch picks the serial path for workers == 1
  const auto dispatched = classify_pairs(*classifier, pairs, 1);
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(same_dist(serial[i], dispatched[i]));
}

TEST_CASE("BM25 multi-query kernels agree with the serial reference") {
  const auto instances = fixture::instances();
  const AtomCorpus corpus(instances, 1.2, 0.75);

  std::vector<std::string> queries;
  for (const SentenceInstance& instance : instances) queries.push_back(instance.premise);

  const auto serial = bm25_query_many_serial(corpus.index(), queries, 20);
  for (int workers : {2, 8}) {
    const auto parallel = bm25_query_many_parallel(corpus.index(), queries, 20, workers);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t q = 0; q < serial.size(); ++q) {
      REQUIRE(parallel[q].size() == serial[q].size());
      for (std::size_t i = 0; i < serial[q].size(); ++i) {
        CHECK(parallel[q][i].doc_id == serial[q][i].doc_id);
        CHECK(parallel[q][i].score == serial[q][i].score);
      }
    }
  }
}

TEST_CASE("construction branches are worker-count independent") {
  const auto classifier = stub_classifier();
  const auto generator = stub_generator();
  const auto instances = fixture::instances();
  const PipelineConfig cfg;
  const AtomCorpus corpus(instances, cfg.bm25_k1, cfg.bm25_b);
  const Ensemble ensemble{{classifier}};

  const auto compare = [](const std::vector<AtomicInstance>& a,
                          const std::vector<AtomicInstance>& b) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].id == b[i].id);
      CHECK(a[i].premise == b[i].premise);
      CHECK(a[i].atom == b[i].atom);
      CHECK(a[i].label == b[i].label);
      CHECK(a[i].provenance == b[i].provenance);
    }
  };

  const auto gold_e = fixture::gold_entailment_instances();
  compare(build_entailment_pairs(gold_e, *classifier, cfg, 1),
          build_entailment_pairs(gold_e, *classifier, cfg, 8));
  compare(build_neutral_pairs(instances, *classifier, corpus, cfg, 1),
          build_neutral_pairs(instances, *classifier, corpus, cfg, 8));
  compare(build_contradiction_pairs(instances, *classifier, ensemble, generator.get(), cfg, 1),
          build_contradiction_pairs(instances, *classifier, ensemble, generator.get(), cfg, 8));
}

TEST_CASE("stratified evaluation is worker-count independent") {
  const auto classifier = stub_classifier();
  const auto instances = fixture::instances();

  for (EvalMode mode : {EvalMode::strict, EvalMode::sum, EvalMode::sentence}) {
    EvalOptions serial_options;
    serial_options.workers = 1;
    EvalOptions parallel_options;
    parallel_options.workers = 8;
    const EvalReport a = stratified_eval(instances, *classifier, mode, serial_options);
    const EvalReport b = stratified_eval(instances, *classifier, mode, parallel_options);
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
  }
}

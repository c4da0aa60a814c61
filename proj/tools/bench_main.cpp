// Times the serial reference kernels against their OpenMP counterparts on
// synthetic workloads and checks the outputs stay identical.

#include <chrono>
#include <iomanip>
#include <iostream>
#include <random>
#include <vector>

#include "atomnli/backends.hpp"
#include "atomnli/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

const std::vector<std::string> kWords = {
    "man",   "woman", "dog",   "cat",  "child", "group",  "running", "walking", "jumping",
    "park",  "street", "ball", "red",  "blue",  "playing", "holding", "camera",  "guitar",
    "water", "pool",  "bench", "tree", "city",  "beach",   "smiling", "reading", "book"};

std::string synth_sentence(std::mt19937_64& rng, int words) {
  std::string sentence = "the";
  for (int i = 0; i < words; ++i) {
    sentence += " " + kWords[rng() % kWords.size()];
  }
  return sentence;
}

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto start = Clock::now();
    fn();
    best = std::min(best, ms_since(start));
  }
  return best;
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool identical) {
  std::cout << std::left << std::setw(26) << name << std::right << std::fixed
            << std::setprecision(1) << std::setw(10) << serial_ms << " ms" << std::setw(10)
            << parallel_ms << " ms" << std::setw(9) << std::setprecision(2)
            << (serial_ms / parallel_ms) << "x   " << (identical ? "identical" : "MISMATCH")
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  int workers = 4;
#ifdef _OPENMP
  workers = omp_get_max_threads();
#endif
  if (argc > 1) workers = std::max(1, std::atoi(argv[1]));

  std::cout << "workers: " << workers << "\n";
  std::cout << std::left << std::setw(26) << "kernel" << std::right << std::setw(13) << "serial"
            << std::setw(13) << "parallel" << std::setw(10) << "speedup" << "\n";

  std::mt19937_64 rng(7);

  // classifier fan-out
  {
    const auto classifier = atomnli::stub_classifier();
    std::vector<atomnli::PremiseClaim> pairs;
    pairs.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
      pairs.push_back({synth_sentence(rng, 8), synth_sentence(rng, 6)});
    }
    std::vector<atomnli::LabelDistribution> serial_out, parallel_out;
    const double serial_ms = time_best_of(
        2, [&] { serial_out = atomnli::classify_pairs_serial(*classifier, pairs); });
    const double parallel_ms = time_best_of(2, [&] {
      parallel_out = atomnli::classify_pairs_parallel(*classifier, pairs, workers);
    });
    bool identical = serial_out.size() == parallel_out.size();
    for (std::size_t i = 0; identical && i < serial_out.size(); ++i) {
      identical = serial_out[i].p_e == parallel_out[i].p_e &&
                  serial_out[i].p_n == parallel_out[i].p_n &&
                  serial_out[i].p_c == parallel_out[i].p_c;
    }
    report("classify_pairs", serial_ms, parallel_ms, identical);
  }

  // multi-query BM25
  {
    std::vector<std::pair<std::string, std::string>> docs;
    docs.reserve(8000);
    for (int i = 0; i < 8000; ++i) {
      docs.emplace_back("d" + std::to_string(i), synth_sentence(rng, 7));
    }
    const atomnli::Bm25Index index = atomnli::Bm25Index::build(docs, 1.2, 0.75);

    std::vector<std::string> queries;
    queries.reserve(1000);
    for (int i = 0; i < 1000; ++i) queries.push_back(synth_sentence(rng, 9));

    std::vector<std::vector<atomnli::SearchHit>> serial_out, parallel_out;
    const double serial_ms =
        time_best_of(2, [&] { serial_out = atomnli::bm25_query_many_serial(index, queries, 100); });
    const double parallel_ms = time_best_of(2, [&] {
      parallel_out = atomnli::bm25_query_many_parallel(index, queries, 100, workers);
    });
    bool identical = serial_out.size() == parallel_out.size();
    for (std::size_t q = 0; identical && q < serial_out.size(); ++q) {
      identical = serial_out[q].size() == parallel_out[q].size();
      for (std::size_t i = 0; identical && i < serial_out[q].size(); ++i) {
        identical = serial_out[q][i].doc_id == parallel_out[q][i].doc_id &&
                    serial_out[q][i].score == parallel_out[q][i].score;
      }
    }
    report("bm25_query_many", serial_ms, parallel_ms, identical);
  }

  return 0;
}

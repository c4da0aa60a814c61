#include "atomnli/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "atomnli/parallel.hpp"
#include "json.hpp"

namespace atomnli {

Bm25Index Bm25Index::build(std::span<const std::pair<std::string, std::string>> docs,
                           double k1, double b) {
  if (docs.empty()) throw InvalidInput("BM25: empty corpus");

  Bm25Index index;
  index.k1_ = k1;
  index.b_ = b;
  index.ids_.reserve(docs.size());
  index.texts_.reserve(docs.size());
  index.doc_len_.reserve(docs.size());

  long long total_len = 0;
  for (const auto& [id, text] : docs) {
    if (!index.id_to_ordinal_.emplace(id, static_cast<int>(index.ids_.size())).second) {
      throw InvalidInput("BM25: duplicate doc id \"" + id + "\"");
    }
    const int ordinal = static_cast<int>(index.ids_.size());
    index.ids_.push_back(id);
    index.texts_.push_back(text);

    const std::vector<std::string> tokens = tokenize(text);
    index.doc_len_.push_back(static_cast<int>(tokens.size()));
    total_len += static_cast<long long>(tokens.size());

    std::map<std::string, int> tf;
    for (const std::string& token : tokens) ++tf[token];
    for (const auto& [term, freq] : tf) {
      index.postings_[term].emplace_back(ordinal, freq);
    }
  }
  index.avgdl_ = static_cast<double>(total_len) / static_cast<double>(docs.size());
  return index;
}

int Bm25Index::doc_freq(const std::string& term) const {
  const auto it = postings_.find(term);
  return it == postings_.end() ? 0 : static_cast<int>(it->second.size());
}

int Bm25Index::term_frequency(const std::string& doc_id, const std::string& term) const {
  const auto doc = id_to_ordinal_.find(doc_id);
  if (doc == id_to_ordinal_.end()) throw InvalidInput("BM25: unknown doc id \"" + doc_id + "\"");
  const auto it = postings_.find(term);
  if (it == postings_.end()) return 0;
  for (const auto& [ordinal, freq] : it->second) {
    if (ordinal == doc->second) return freq;
  }
  return 0;
}

int Bm25Index::doc_length(const std::string& doc_id) const {
  const auto doc = id_to_ordinal_.find(doc_id);
  if (doc == id_to_ordinal_.end()) throw InvalidInput("BM25: unknown doc id \"" + doc_id + "\"");
  return doc_len_[static_cast<std::size_t>(doc->second)];
}

std::vector<SearchHit> Bm25Index::query(const std::string& text, int k) const {
  if (k < 1) throw InvalidInput("BM25: k must be >= 1");

  // unique query terms in first-occurrence order
  std::vector<std::string> terms;
  for (std::string& token : tokenize(text)) {
    if (std::find(terms.begin(), terms.end(), token) == terms.end()) {
      terms.push_back(std::move(token));
    }
  }

  const double n_docs = static_cast<double>(ids_.size());
  std::vector<double> scores(ids_.size(), 0.0);
  for (const std::string& term : terms) {
    const auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double df = static_cast<double>(it->second.size());
    const double idf = std::log((n_docs - df + 0.5) / (df + 0.5) + 1.0);
    for (const auto& [ordinal, freq] : it->second) {
      const double f = static_cast<double>(freq);
      const double rel_len =
          static_cast<double>(doc_len_[static_cast<std::size_t>(ordinal)]) / avgdl_;
      const double denom = f + k1_ * (1.0 - b_ + b_ * rel_len);
      scores[static_cast<std::size_t>(ordinal)] += idf * f * (k1_ + 1.0) / denom;
    }
  }

  std::vector<SearchHit> hits;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > 0.0) hits.push_back(SearchHit{ids_[i], scores[i]});
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (hits.size() > static_cast<std::size_t>(k)) hits.resize(static_cast<std::size_t>(k));
  return hits;
}

namespace {
constexpr const char* kIndexFormat = "atomnli-bm25";
constexpr int kIndexVersion = 1;
}  // namespace

void Bm25Index::save(const std::string& path) const {
  nlohmann::ordered_json out;
  out["format"] = kIndexFormat;
  out["version"] = kIndexVersion;
  out["k1"] = k1_;
  out["b"] = b_;
  out["docs"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    out["docs"].push_back({{"id", ids_[i]}, {"text", texts_[i]}});
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot write index file: " + path);
  file << out.dump() << '\n';
}

Bm25Index Bm25Index::load(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot read index file: " + path);
  nlohmann::json parsed = nlohmann::json::parse(file, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw InvalidInput("index file is not valid JSON: " + path);
  }
  if (parsed.value("format", "") != kIndexFormat || parsed.value("version", 0) != kIndexVersion) {
    throw InvalidInput("unsupported index format in " + path);
  }
  std::vector<std::pair<std::string, std::string>> docs;
  for (const auto& doc : parsed.at("docs")) {
    docs.emplace_back(doc.at("id").get<std::string>(), doc.at("text").get<std::string>());
  }
  return build(docs, parsed.at("k1").get<double>(), parsed.at("b").get<double>());
}

std::vector<RerankHit> rerank_by_neutrality(
    const std::string& premise, std::span<const std::pair<std::string, std::string>> candidates,
    const Classifier& classifier, double tau_n, int workers) {
  std::vector<LabelDistribution> dists(candidates.size());
  for_each_index(candidates.size(), workers, [&](std::size_t i) {
    dists[i] = classifier.classify(premise, candidates[i].second);
    dists[i].validate();
  });

  std::vector<RerankHit> kept;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (dists[i].p_n > tau_n) kept.push_back(RerankHit{candidates[i].first, dists[i].p_n});
  }
  std::sort(kept.begin(), kept.end(), [](const RerankHit& a, const RerankHit& b) {
    if (a.p_n != b.p_n) return a.p_n > b.p_n;
    return a.doc_id < b.doc_id;
  });
  return kept;
}

}  // namespace atomnli

#include <cstdlib>
#include <utility>

#include "atomnli/backends.hpp"
#include "httplib.h"
#include "json.hpp"

namespace atomnli {

namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string scheme_host;  // e.g. "http://127.0.0.1:8080"
  std::string path_prefix;  // e.g. "/v1", possibly empty
};

ParsedUrl split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw BackendError("remote endpoint is not a URL: \"" + url + "\"");
  }
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, ""};
  return {url.substr(0, slash), url.substr(slash)};
}

class HttpBackend {
public:
  explicit HttpBackend(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    if (endpoint_.url.empty()) throw BackendError("remote endpoint URL is empty");
    split_url(endpoint_.url);  // validate eagerly
  }

  const std::string& url() const { return endpoint_.url; }

  json post(const std::string& route, const json& body) const {
    const ParsedUrl parsed = split_url(endpoint_.url);
    httplib::Client client(parsed.scheme_host);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    httplib::Headers headers;
    if (!endpoint_.api_key_env.empty()) {
      const char* key = std::getenv(endpoint_.api_key_env.c_str());
      if (key == nullptr || *key == '\0') {
        throw BackendError("environment variable " + endpoint_.api_key_env +
                           " is not set for endpoint " + endpoint_.url);
      }
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    const std::string path = parsed.path_prefix + route;
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
      throw BackendError("request to " + endpoint_.url + route + " failed: " +
                         httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw BackendError("request to " + endpoint_.url + route + " returned status " +
                         std::to_string(res->status));
    }
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) {
      throw BackendError("endpoint " + endpoint_.url + route + " returned invalid JSON");
    }
    return reply;
  }

private:
  RemoteEndpoint endpoint_;
};

LabelDistribution distribution_from_json(const json& value, const std::string& context) {
  if (!value.is_object() || !value.contains("p_e") || !value.contains("p_n") ||
      !value.contains("p_c")) {
    throw BackendError(context + ": expected object with p_e/p_n/p_c");
  }
  LabelDistribution dist{value.at("p_e").get<double>(), value.at("p_n").get<double>(),
                         value.at("p_c").get<double>()};
  try {
    dist.validate();
  } catch (const InvalidInput& e) {
    throw BackendError(context + ": " + e.what());
  }
  return dist;
}

class RemoteClassifier final : public Classifier {
public:
  explicit RemoteClassifier(RemoteEndpoint endpoint) : http_(std::move(endpoint)) {}

  std::string name() const override { return "remote:" + http_.url(); }

  LabelDistribution classify(const std::string& premise,
                             const std::string& claim) const override {
    const json reply = http_.post("/classify", json{{"premise", premise}, {"claim", claim}});
    return distribution_from_json(reply, name());
  }

  std::vector<LabelDistribution> classify_batch(
      std::span<const PremiseClaim> pairs) const override {
    json body = json::object();
    body["pairs"] = json::array();
    for (const PremiseClaim& pair : pairs) {
      body["pairs"].push_back({{"premise", pair.premise}, {"claim", pair.claim}});
    }
    const json reply = http_.post("/classify_batch", body);
    if (!reply.is_object() || !reply.contains("results") || !reply["results"].is_array() ||
        reply["results"].size() != pairs.size()) {
      throw BackendError(name() + ": batch reply must carry one result per pair");
    }
    std::vector<LabelDistribution> out;
    out.reserve(pairs.size());
    for (const json& item : reply["results"]) {
      out.push_back(distribution_from_json(item, name()));
    }
    return out;
  }

private:
  HttpBackend http_;
};

class RemoteDecomposer final : public Decomposer {
public:
  explicit RemoteDecomposer(RemoteEndpoint endpoint) : http_(std::move(endpoint)) {}

  std::vector<AtomicFact> decompose(const std::string& hypothesis,
                                    const std::string& source_id) const override {
    if (trim(hypothesis).empty()) throw InvalidInput("decompose: empty hypothesis");
    const json reply = http_.post("/decompose", json{{"hypothesis", hypothesis}});
    if (!reply.is_object() || !reply.contains("atoms") || !reply["atoms"].is_array()) {
      throw BackendError("remote decomposer: expected {atoms: [...]}");
    }
    std::vector<AtomicFact> atoms;
    std::vector<std::string> seen;
    for (const json& item : reply["atoms"]) {
      if (!item.is_string()) throw BackendError("remote decomposer: atoms must be strings");
      const std::string text = normalize_whitespace(item.get<std::string>());
      if (text.empty()) continue;
      const std::string key = to_lower(text);
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      atoms.push_back(AtomicFact{text, source_id, static_cast<int>(atoms.size())});
    }
    if (atoms.empty()) {
      throw BackendError("remote decomposer returned no usable atoms for: " + hypothesis);
    }
    return atoms;
  }

private:
  HttpBackend http_;
};

class RemoteGenerator final : public Generator {
public:
  explicit RemoteGenerator(RemoteEndpoint endpoint) : http_(std::move(endpoint)) {}

  std::string generate_contradiction(const std::string& premise,
                                     const std::string& atom) const override {
    const std::string prompt = render_contradiction_prompt(premise, atom);
    const json reply = http_.post(
        "/generate", json{{"premise", premise}, {"atom", atom}, {"prompt", prompt}});
    if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string()) {
      throw BackendError("remote generator: expected {text: \"...\"}");
    }
    const std::string candidate = parse_generation(reply["text"].get<std::string>());
    if (normalize_whitespace(candidate) == normalize_whitespace(atom)) {
      throw BackendError("remote generator echoed the input atom: " + atom);
    }
    return candidate;
  }

private:
  HttpBackend http_;
};

}  // namespace

std::shared_ptr<const Classifier> remote_classifier(RemoteEndpoint endpoint) {
  return std::make_shared<RemoteClassifier>(std::move(endpoint));
}

std::shared_ptr<const Decomposer> remote_decomposer(RemoteEndpoint endpoint) {
  return std::make_shared<RemoteDecomposer>(std::move(endpoint));
}

std::shared_ptr<const Generator> remote_generator(RemoteEndpoint endpoint) {
  return std::make_shared<RemoteGenerator>(std::move(endpoint));
}

}  // namespace atomnli

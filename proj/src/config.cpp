#include "atomnli/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

namespace atomnli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown_keys(const json& object, const std::set<std::string>& known,
                         const std::string& context) {
  for (const auto& [key, value] : object.items()) {
    if (!known.count(key)) {
      throw InvalidInput("config: unknown key \"" + key + "\" in " + context);
    }
  }
}

template <typename T>
void read_field(const json& object, const char* key, T& target) {
  if (!object.contains(key)) return;
  try {
    target = object.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("config: field \"") + key + "\" has the wrong type");
  }
}

BackendConfig parse_backend(const json& object, const std::string& context) {
  if (!object.is_object()) throw InvalidInput("config: " + context + " must be an object");
  reject_unknown_keys(object, {"kind", "endpoint", "api_key_env"}, context);
  BackendConfig backend;
  read_field(object, "kind", backend.kind);
  read_field(object, "endpoint", backend.endpoint);
  read_field(object, "api_key_env", backend.api_key_env);
  if (backend.kind != "stub" && backend.kind != "remote") {
    throw InvalidInput("config: " + context + ".kind must be \"stub\" or \"remote\", got \"" +
                       backend.kind + "\"");
  }
  return backend;
}

}  // namespace

RunConfig parse_run_config(const json& document) {
  if (!document.is_object()) throw InvalidInput("config: document must be a JSON object");
  reject_unknown_keys(document, {"pipeline", "backends", "branches", "workers", "io"},
                      "top level");

  RunConfig config;

  if (document.contains("pipeline")) {
    const json& pipeline = document.at("pipeline");
    if (!pipeline.is_object()) throw InvalidInput("config: pipeline must be an object");
    reject_unknown_keys(pipeline,
                        {"tau_e", "tau_n", "tau_c", "retrieval_k", "bm25_k1", "bm25_b",
                         "max_atoms", "per_class_cap", "seed", "direct_gold_only"},
                        "pipeline");
    read_field(pipeline, "tau_e", config.pipeline.tau_e);
    read_field(pipeline, "tau_n", config.pipeline.tau_n);
    read_field(pipeline, "tau_c", config.pipeline.tau_c);
    read_field(pipeline, "retrieval_k", config.pipeline.retrieval_k);
    read_field(pipeline, "bm25_k1", config.pipeline.bm25_k1);
    read_field(pipeline, "bm25_b", config.pipeline.bm25_b);
    read_field(pipeline, "max_atoms", config.pipeline.max_atoms);
    if (pipeline.contains("per_class_cap") && !pipeline.at("per_class_cap").is_null()) {
      int cap = 0;
      read_field(pipeline, "per_class_cap", cap);
      config.pipeline.per_class_cap = cap;
    }
    read_field(pipeline, "seed", config.pipeline.seed);
    read_field(pipeline, "direct_gold_only", config.pipeline.direct_gold_only);
    config.pipeline.validate();
  }

  if (document.contains("backends")) {
    const json& backends = document.at("backends");
    if (!backends.is_object()) throw InvalidInput("config: backends must be an object");
    reject_unknown_keys(backends, {"classifier", "decomposer", "generator", "ensemble"},
                        "backends");
    if (backends.contains("classifier")) {
      config.classifier = parse_backend(backends.at("classifier"), "backends.classifier");
    }
    if (backends.contains("decomposer")) {
      config.decomposer = parse_backend(backends.at("decomposer"), "backends.decomposer");
    }
    if (backends.contains("generator")) {
      config.generator = parse_backend(backends.at("generator"), "backends.generator");
    }
    if (backends.contains("ensemble")) {
      const json& ensemble = backends.at("ensemble");
      if (!ensemble.is_array()) throw InvalidInput("config: backends.ensemble must be an array");
      for (std::size_t i = 0; i < ensemble.size(); ++i) {
        config.ensemble.push_back(
            parse_backend(ensemble[i], "backends.ensemble[" + std::to_string(i) + "]"));
      }
    }
  }

  if (document.contains("branches")) {
    const json& branches = document.at("branches");
    if (!branches.is_object()) throw InvalidInput("config: branches must be an object");
    reject_unknown_keys(branches, {"entailment", "neutral", "contradiction", "generation"},
                        "branches");
    read_field(branches, "entailment", config.branches.entailment);
    read_field(branches, "neutral", config.branches.neutral);
    read_field(branches, "contradiction", config.branches.contradiction);
    read_field(branches, "generation", config.branches.generation);
  }

  read_field(document, "workers", config.workers);
  if (config.workers < 1) throw InvalidInput("config: workers must be >= 1");

  if (document.contains("io")) {
    const json& io = document.at("io");
    if (!io.is_object()) throw InvalidInput("config: io must be an object");
    reject_unknown_keys(io, {"input", "output_dir", "split"}, "io");
    read_field(io, "input", config.input);
    read_field(io, "output_dir", config.output_dir);
    read_field(io, "split", config.split);
    if (config.split != "train" && config.split != "validation" && config.split != "test") {
      throw InvalidInput("config: io.split must be train, validation or test");
    }
  }

  return config;
}

RunConfig load_run_config(const std::string& path, const std::string& workdir) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot open config file: " + path);
  json document = json::parse(file, nullptr, false);
  if (document.is_discarded()) throw InvalidInput("config file is not valid JSON: " + path);
  RunConfig config = parse_run_config(document);

  const std::filesystem::path base(workdir);
  const auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) {
      p = (base / p).lexically_normal().string();
    }
  };
  resolve(config.input);
  resolve(config.output_dir);
  return config;
}

namespace {

ordered_json backend_to_json(const BackendConfig& backend) {
  return {{"kind", backend.kind},
          {"endpoint", backend.endpoint},
          {"api_key_env", backend.api_key_env}};
}

}  // namespace

ordered_json run_config_to_json(const RunConfig& config) {
  ordered_json out;
  out["pipeline"] = {{"tau_e", config.pipeline.tau_e},
                     {"tau_n", config.pipeline.tau_n},
                     {"tau_c", config.pipeline.tau_c},
                     {"retrieval_k", config.pipeline.retrieval_k},
                     {"bm25_k1", config.pipeline.bm25_k1},
                     {"bm25_b", config.pipeline.bm25_b},
                     {"max_atoms", config.pipeline.max_atoms},
                     {"per_class_cap", config.pipeline.per_class_cap
                                           ? ordered_json(*config.pipeline.per_class_cap)
                                           : ordered_json(nullptr)},
                     {"seed", config.pipeline.seed},
                     {"direct_gold_only", config.pipeline.direct_gold_only}};
  ordered_json ensemble = ordered_json::array();
  for (const BackendConfig& member : config.ensemble) ensemble.push_back(backend_to_json(member));
  out["backends"] = {{"classifier", backend_to_json(config.classifier)},
                     {"decomposer", backend_to_json(config.decomposer)},
                     {"generator", backend_to_json(config.generator)},
                     {"ensemble", std::move(ensemble)}};
  out["branches"] = {{"entailment", config.branches.entailment},
                     {"neutral", config.branches.neutral},
                     {"contradiction", config.branches.contradiction},
                     {"generation", config.branches.generation}};
  out["workers"] = config.workers;
  out["io"] = {{"input", config.input},
               {"output_dir", config.output_dir},
               {"split", config.split}};
  return out;
}

std::shared_ptr<const Classifier> make_classifier_backend(const BackendConfig& backend) {
  if (backend.kind == "stub") return stub_classifier();
  if (backend.endpoint.empty()) throw BackendError("remote classifier requires an endpoint");
  return remote_classifier(RemoteEndpoint{backend.endpoint, backend.api_key_env});
}

std::shared_ptr<const Decomposer> make_decomposer_backend(const BackendConfig& backend) {
  if (backend.kind == "stub") return stub_decomposer();
  if (backend.endpoint.empty()) throw BackendError("remote decomposer requires an endpoint");
  return remote_decomposer(RemoteEndpoint{backend.endpoint, backend.api_key_env});
}

std::shared_ptr<const Generator> make_generator_backend(const BackendConfig& backend) {
  if (backend.kind == "stub") return stub_generator();
  if (backend.endpoint.empty()) throw BackendError("remote generator requires an endpoint");
  return remote_generator(RemoteEndpoint{backend.endpoint, backend.api_key_env});
}

Ensemble make_ensemble_backend(const RunConfig& config) {
  Ensemble ensemble;
  if (config.ensemble.empty()) {
    ensemble.members.push_back(make_classifier_backend(config.classifier));
  } else {
    for (const BackendConfig& member : config.ensemble) {
      ensemble.members.push_back(make_classifier_backend(member));
    }
  }
  return ensemble;
}

Backends make_backends(const RunConfig& config) {
  Backends backends;
  backends.classifier = make_classifier_backend(config.classifier);
  backends.decomposer = make_decomposer_backend(config.decomposer);
  backends.generator = make_generator_backend(config.generator);
  backends.ensemble = make_ensemble_backend(config);
  return backends;
}

}  // namespace atomnli

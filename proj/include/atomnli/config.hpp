#pragma once

#include <memory>
#include <string>
#include <vector>

#include "atomnli/backends.hpp"
#include "atomnli/core.hpp"
#include "json.hpp"

namespace atomnli {

struct BackendConfig {
  std::string kind = "stub";  // "stub" or "remote"
  std::string endpoint;
  std::string api_key_env;
};

/// Which construction branches a build run executes.
struct BranchConfig {
  bool entailment = true;
  bool neutral = true;
  bool contradiction = true;
  bool generation = true;  // the LLM sub-branch of contradiction
};

/// Everything a run needs: pipeline knobs, backend selection, branch toggles,
/// worker count and I/O paths. One JSON document, unknown keys rejected.
struct RunConfig {
  PipelineConfig pipeline;
  BackendConfig classifier;
  BackendConfig decomposer;
  BackendConfig generator;
  std::vector<BackendConfig> ensemble;  // empty means: reuse the classifier
  BranchConfig branches;
  int workers = 1;
  std::string input;
  std::string output_dir = "out";
  std::string split = "train";
};

/// Parse and validate a config document. Unknown keys anywhere raise
/// InvalidInput naming the key.
RunConfig parse_run_config(const nlohmann::json& document);

/// Load from a file, resolving relative paths against workdir.
RunConfig load_run_config(const std::string& path, const std::string& workdir);

/// Full echo of the effective configuration, defaults included.
nlohmann::ordered_json run_config_to_json(const RunConfig& config);

/// Instantiated backends for a run.
struct Backends {
  std::shared_ptr<const Classifier> classifier;
  std::shared_ptr<const Decomposer> decomposer;
  std::shared_ptr<const Generator> generator;
  Ensemble ensemble;
};

// Factories for individual backends; remote kinds require an endpoint and
// raise BackendError otherwise. Commands build only what they use, so a
// disabled remote branch never has to be reachable.
std::shared_ptr<const Classifier> make_classifier_backend(const BackendConfig& backend);
std::shared_ptr<const Decomposer> make_decomposer_backend(const BackendConfig& backend);
std::shared_ptr<const Generator> make_generator_backend(const BackendConfig& backend);
/// Configured ensemble; defaults to the run's classifier when none is listed.
Ensemble make_ensemble_backend(const RunConfig& config);

/// All four at once.
Backends make_backends(const RunConfig& config);

}  // namespace atomnli

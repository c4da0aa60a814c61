#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "atomnli/core.hpp"

namespace atomnli {

/// Three-way NLI scorer over (premise, claim) pairs. Implementations must
/// return distributions that pass LabelDistribution::validate(); remote
/// adapters check this at the boundary.
class Classifier {
public:
  virtual ~Classifier() = default;

  virtual std::string name() const = 0;
  virtual LabelDistribution classify(const std::string& premise,
                                     const std::string& claim) const = 0;

  /// Default: element-wise classify, preserving pair order.
  virtual std::vector<LabelDistribution> classify_batch(std::span<const PremiseClaim> pairs) const;
};

/// Splits a hypothesis into atomic facts. Output atoms are non-empty,
/// deduplicated and indexed in order; source_id is stamped onto each atom.
class Decomposer {
public:
  virtual ~Decomposer() = default;

  virtual std::vector<AtomicFact> decompose(const std::string& hypothesis,
                                            const std::string& source_id = "") const = 0;
};

/// Produces a minimally altered version of an atom that contradicts the
/// premise. The returned text is non-empty and differs from the input atom.
class Generator {
public:
  virtual ~Generator() = default;

  virtual std::string generate_contradiction(const std::string& premise,
                                             const std::string& atom) const = 0;
};

struct Ensemble {
  std::vector<std::shared_ptr<const Classifier>> members;
};

// ---------------------------------------------------------------------------
// Deterministic offline stubs
// ---------------------------------------------------------------------------

/// Word-overlap heuristic with fixed output triples. Negation asymmetry
/// between claim and premise wins over overlap; overlap ratio >= 0.75 of the
/// claim's distinct tokens maps to entailment; everything else to neutral.
/// Deterministic across runs and platforms.
std::shared_ptr<const Classifier> stub_classifier();

/// Splits on "and" between clause-like segments and on ", which"/", who"
/// boundaries, copying the first fragment's subject into subjectless
/// fragments. Returns the whole hypothesis when no split point exists.
std::shared_ptr<const Decomposer> stub_decomposer();

/// Rule-based negation edit ("Some men ..." -> "No men ...", auxiliary
/// negation, leading "no" flip). Always returns text distinct from the atom.
std::shared_ptr<const Generator> stub_generator();

// ---------------------------------------------------------------------------
// Ensemble validation and prompt plumbing
// ---------------------------------------------------------------------------

/// True iff every member assigns argmax contradiction with p_c > tau_c.
bool ensemble_contradiction_check(const Ensemble& ensemble, const std::string& premise,
                                  const std::string& candidate, double tau_c);

/// Fills the contradiction-generation prompt template, two in-context
/// examples included; the rendered prompt ends with "Contradiction:".
/// Throws InvalidInput when either input is empty.
std::string render_contradiction_prompt(const std::string& premise, const std::string& atom);

/// Extracts the completion: text after the final "Contradiction:" marker if
/// present, else the first non-empty line; quotes and whitespace trimmed.
/// Throws InvalidInput when nothing remains.
std::string parse_generation(const std::string& raw);

// ---------------------------------------------------------------------------
// Remote HTTP adapters
// ---------------------------------------------------------------------------

/// Endpoint base URL (scheme://host[:port][/path-prefix]) plus the name of
/// the environment variable holding the bearer token, if any.
struct RemoteEndpoint {
  std::string url;
  std::string api_key_env;
};

/// POST {premise, claim} -> {p_e, p_n, p_c}; batch POST {pairs: [...]} ->
/// {results: [...]}. Responses are validated as label distributions.
std::shared_ptr<const Classifier> remote_classifier(RemoteEndpoint endpoint);

/// POST {hypothesis} -> {atoms: ["..."]}.
std::shared_ptr<const Decomposer> remote_decomposer(RemoteEndpoint endpoint);

/// POST {premise, atom, prompt} -> {text}; the reply goes through
/// parse_generation and the distinct-from-atom check.
std::shared_ptr<const Generator> remote_generator(RemoteEndpoint endpoint);

}  // namespace atomnli

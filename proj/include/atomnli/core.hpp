#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace atomnli {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unknown labels, bad schemas, empty text where content is required.
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// A classifier / decomposer / generator backend failed or is not configured.
class BackendError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

enum class Label : std::uint8_t { entailment = 0, neutral = 1, contradiction = 2 };

inline constexpr std::array<Label, 3> kAllLabels = {Label::entailment, Label::neutral,
                                                    Label::contradiction};

std::string_view to_string(Label label);

/// Case-insensitive parse of the three canonical label strings.
/// Throws InvalidInput naming the offending string.
Label parse_label(std::string_view text);

/// Tie-break precedence: contradiction > neutral > entailment. Higher wins ties.
int label_precedence(Label label);

struct LabelDistribution {
  double p_e = 0.0;
  double p_n = 0.0;
  double p_c = 0.0;

  double operator[](Label label) const;
  /// Components in [0,1] and summing to 1 within 1e-6.
  void validate() const;
  static LabelDistribution one_hot(Label label);
};

/// Unnormalized non-negative accumulators, one per label.
struct ScoreTriple {
  double s_e = 0.0;
  double s_n = 0.0;
  double s_c = 0.0;

  double operator[](Label label) const;
  void validate() const;
};

/// Label of the strictly largest component; exact ties go to the label
/// highest in the declared precedence order.
Label argmax_label(const LabelDistribution& dist);
Label argmax_label(const ScoreTriple& scores);

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

struct AtomicFact {
  std::string text;
  std::string source_id;
  int index = 0;
};

struct SentenceInstance {
  std::string id;
  std::string premise;
  std::string hypothesis;
  Label gold = Label::neutral;
  std::vector<AtomicFact> atoms;
};

enum class Provenance : std::uint8_t {
  direct_entailment,
  direct_neutral,
  retrieved_neutral,
  direct_contradiction,
  generated_contradiction,
};

std::string_view to_string(Provenance provenance);
Provenance parse_provenance(std::string_view text);

/// The label each provenance is allowed to carry.
Label provenance_label(Provenance provenance);

struct AtomicInstance {
  std::string id;
  std::string premise;
  std::string atom;
  Label label = Label::neutral;
  Provenance provenance = Provenance::direct_neutral;

  /// Checks provenance/label consistency and non-empty texts.
  void validate() const;
};

/// One (premise, claim) classification request.
struct PremiseClaim {
  std::string premise;
  std::string claim;
};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct PipelineConfig {
  double tau_e = 0.5;
  double tau_n = 0.5;
  double tau_c = 0.5;
  int retrieval_k = 100;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  int max_atoms = 8;
  std::optional<int> per_class_cap;
  std::uint64_t seed = 0;
  /// Restrict the direct branches to instances whose gold label matches the
  /// branch label, instead of scanning atoms from all instances.
  bool direct_gold_only = false;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Text utilities shared by the stub backends, BM25 and dedup keys
// ---------------------------------------------------------------------------

/// Lowercase, split on non-alphanumeric runs, drop empty tokens. ASCII only.
std::vector<std::string> tokenize(std::string_view text);

std::string trim(std::string_view text);

/// Trim plus collapse of internal whitespace runs to single spaces.
std::string normalize_whitespace(std::string_view text);

std::string to_lower(std::string_view text);

/// UTF-8 code point count (falls back to byte count on malformed input).
std::size_t codepoint_count(std::string_view text);

}  // namespace atomnli

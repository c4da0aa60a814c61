#include "atomnli/core.hpp"

#include <cctype>
#include <cmath>

namespace atomnli {

namespace {

constexpr std::string_view kLabelNames[3] = {"entailment", "neutral", "contradiction"};

constexpr std::string_view kProvenanceNames[5] = {
    "direct-entailment", "direct-neutral", "retrieved-neutral", "direct-contradiction",
    "generated-contradiction"};

}  // namespace

std::string_view to_string(Label label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

Label parse_label(std::string_view text) {
  const std::string lowered = to_lower(text);
  for (Label label : kAllLabels) {
    if (lowered == kLabelNames[static_cast<std::size_t>(label)]) return label;
  }
  throw InvalidInput("unknown label: \"" + std::string(text) + "\"");
}

int label_precedence(Label label) {
  switch (label) {
    case Label::contradiction: return 2;
    case Label::neutral: return 1;
    case Label::entailment: return 0;
  }
  return 0;
}

double LabelDistribution::operator[](Label label) const {
  switch (label) {
    case Label::entailment: return p_e;
    case Label::neutral: return p_n;
    case Label::contradiction: return p_c;
  }
  return 0.0;
}

void LabelDistribution::validate() const {
  for (Label label : kAllLabels) {
    const double p = (*this)[label];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidInput("label probability out of [0,1]: " + std::to_string(p));
    }
  }
  const double sum = p_e + p_n + p_c;
  if (std::fabs(sum - 1.0) > 1e-6) {
    throw InvalidInput("label probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
}

LabelDistribution LabelDistribution::one_hot(Label label) {
  LabelDistribution d;
  switch (label) {
    case Label::entailment: d.p_e = 1.0; break;
    case Label::neutral: d.p_n = 1.0; break;
    case Label::contradiction: d.p_c = 1.0; break;
  }
  return d;
}

double ScoreTriple::operator[](Label label) const {
  switch (label) {
    case Label::entailment: return s_e;
    case Label::neutral: return s_n;
    case Label::contradiction: return s_c;
  }
  return 0.0;
}

void ScoreTriple::validate() const {
  for (Label label : kAllLabels) {
    const double s = (*this)[label];
    if (!(s >= 0.0)) throw InvalidInput("negative score component: " + std::to_string(s));
  }
}

namespace {

template <typename Triple>
Label argmax_impl(const Triple& values) {
  Label best = Label::entailment;
  for (Label label : {Label::neutral, Label::contradiction}) {
    const double v = values[label];
    const double b = values[best];
    if (v > b || (v == b && label_precedence(label) > label_precedence(best))) best = label;
  }
  return best;
}

}  // namespace

Label argmax_label(const LabelDistribution& dist) {
  return argmax_impl(dist);
}

Label argmax_label(const ScoreTriple& scores) {
  return argmax_impl(scores);
}

std::string_view to_string(Provenance provenance) {
  return kProvenanceNames[static_cast<std::size_t>(provenance)];
}

Provenance parse_provenance(std::string_view text) {
  for (std::size_t i = 0; i < 5; ++i) {
    if (text == kProvenanceNames[i]) return static_cast<Provenance>(i);
  }
  throw InvalidInput("unknown provenance: \"" + std::string(text) + "\"");
}

Label provenance_label(Provenance provenance) {
  switch (provenance) {
    case Provenance::direct_entailment: return Label::entailment;
    case Provenance::direct_neutral:
    case Provenance::retrieved_neutral: return Label::neutral;
    case Provenance::direct_contradiction:
    case Provenance::generated_contradiction: return Label::contradiction;
  }
  return Label::neutral;
}

void AtomicInstance::validate() const {
  if (trim(premise).empty()) throw InvalidInput("atomic instance " + id + ": empty premise");
  if (trim(atom).empty()) throw InvalidInput("atomic instance " + id + ": empty atom");
  if (provenance_label(provenance) != label) {
    throw InvalidInput("atomic instance " + id + ": provenance " +
                       std::string(to_string(provenance)) + " is inconsistent with label " +
                       std::string(to_string(label)));
  }
}

void PipelineConfig::validate() const {
  for (double tau : {tau_e, tau_n, tau_c}) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
      throw InvalidInput("threshold out of [0,1]: " + std::to_string(tau));
    }
  }
  if (retrieval_k < 1) throw InvalidInput("retrieval_k must be >= 1");
  if (max_atoms < 1) throw InvalidInput("max_atoms must be >= 1");
  if (!(bm25_k1 >= 0.0)) throw InvalidInput("bm25_k1 must be >= 0");
  if (!(bm25_b >= 0.0 && bm25_b <= 1.0)) throw InvalidInput("bm25_b must be in [0,1]");
  if (per_class_cap && *per_class_cap < 1) throw InvalidInput("per_class_cap must be >= 1");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  bool in_space = true;  // swallow leading whitespace
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(static_cast<char>(c));
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

std::size_t codepoint_count(std::string_view text) {
  std::size_t count = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++count;
  }
  return count;
}

}  // namespace atomnli

#include "atomnli/backends.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace atomnli {

std::vector<LabelDistribution> Classifier::classify_batch(
    std::span<const PremiseClaim> pairs) const {
  std::vector<LabelDistribution> out;
  out.reserve(pairs.size());
  for (const PremiseClaim& pair : pairs) out.push_back(classify(pair.premise, pair.claim));
  return out;
}

namespace {

const std::set<std::string> kNegationTokens = {"no", "not", "never", "none"};

const std::set<std::string> kAuxiliaries = {
    "is",  "are",  "was", "were", "am",   "be",  "been",   "being", "has",  "have", "had", "do",
    "does", "did", "can", "could", "will", "would", "shall", "should", "may", "might", "must"};

std::set<std::string> negation_signature(const std::string& text) {
  std::set<std::string> sig;
  for (const std::string& token : tokenize(text)) {
    if (kNegationTokens.count(token)) sig.insert(token);
  }
  if (to_lower(text).find("n't") != std::string::npos) sig.insert("n't");
  return sig;
}

// Frozen stub output triples.
constexpr LabelDistribution kStubEntail{0.80, 0.15, 0.05};
constexpr LabelDistribution kStubNeutral{0.15, 0.70, 0.15};
constexpr LabelDistribution kStubContra{0.05, 0.15, 0.80};

class StubClassifier final : public Classifier {
public:
  std::string name() const override { return "stub"; }

  LabelDistribution classify(const std::string& premise,
                             const std::string& claim) const override {
    const std::vector<std::string> claim_tokens = tokenize(claim);
    if (claim_tokens.empty()) throw InvalidInput("stub classifier: empty claim");

    if (negation_signature(claim) != negation_signature(premise)) return kStubContra;

    const std::vector<std::string> premise_tokens = tokenize(premise);
    const std::set<std::string> premise_set(premise_tokens.begin(), premise_tokens.end());
    const std::set<std::string> claim_set(claim_tokens.begin(), claim_tokens.end());
    std::size_t shared = 0;
    for (const std::string& token : claim_set) shared += premise_set.count(token);
    const double ratio = static_cast<double>(shared) / static_cast<double>(claim_set.size());
    return ratio >= 0.75 ? kStubEntail : kStubNeutral;
  }
};

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::istringstream stream(text);
  std::string word;
  while (stream >> word) words.push_back(word);
  return words;
}

std::string join_words(std::span<const std::string> words) {
  std::string out;
  for (const std::string& word : words) {
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

// A word acts as a verb marker when it is an auxiliary or has a gerund/past
// participle shape. Used both for clause detection and subject extraction.
bool is_verb_marker(const std::string& word) {
  const std::vector<std::string> tokens = tokenize(word);
  if (tokens.size() != 1) return false;
  const std::string& t = tokens.front();
  if (kAuxiliaries.count(t)) return true;
  if (t.size() >= 5 && t.ends_with("ing")) return true;
  if (t.size() >= 4 && t.ends_with("ed")) return true;
  return false;
}

bool is_auxiliary(const std::string& word) {
  const std::vector<std::string> tokens = tokenize(word);
  return tokens.size() == 1 && kAuxiliaries.count(tokens.front()) > 0;
}

bool clause_like(std::span<const std::string> words) {
  return std::any_of(words.begin(), words.end(),
                     [](const std::string& w) { return is_verb_marker(w); });
}

// Segments separated by ", which " / ", who "; the marker itself is dropped,
// leaving the relative clause as a subjectless fragment.
std::vector<std::string> split_relative_clauses(const std::string& text) {
  static const std::string markers[] = {", which ", ", who "};
  std::vector<std::string> segments;
  std::string rest = text;
  for (;;) {
    std::size_t best_pos = std::string::npos;
    std::size_t best_len = 0;
    const std::string lowered = to_lower(rest);
    for (const std::string& marker : markers) {
      const std::size_t pos = lowered.find(marker);
      if (pos != std::string::npos && pos < best_pos) {
        best_pos = pos;
        best_len = marker.size();
      }
    }
    if (best_pos == std::string::npos) break;
    segments.push_back(rest.substr(0, best_pos));
    rest = rest.substr(best_pos + best_len);
  }
  segments.push_back(rest);
  return segments;
}

// Splits a segment at "and" words whenever both neighbouring parts look like
// clauses; non-clause parts are folded back into their left neighbour.
std::vector<std::vector<std::string>> split_conjunctions(const std::vector<std::string>& words) {
  std::vector<std::vector<std::string>> parts;
  std::vector<std::string> current;
  for (const std::string& word : words) {
    if (to_lower(word) == "and") {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(word);
    }
  }
  parts.push_back(current);

  std::vector<std::vector<std::string>> fragments;
  fragments.push_back(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (!parts[i].empty() && clause_like(parts[i]) && clause_like(fragments.back())) {
      fragments.push_back(parts[i]);
    } else {
      fragments.back().push_back("and");
      fragments.back().insert(fragments.back().end(), parts[i].begin(), parts[i].end());
    }
  }
  return fragments;
}

class StubDecomposer final : public Decomposer {
public:
  std::vector<AtomicFact> decompose(const std::string& hypothesis,
                                    const std::string& source_id) const override {
    const std::string cleaned = normalize_whitespace(hypothesis);
    if (cleaned.empty()) throw InvalidInput("decompose: empty hypothesis");

    std::vector<std::vector<std::string>> fragments;
    for (const std::string& segment : split_relative_clauses(cleaned)) {
      const std::vector<std::string> words = split_words(segment);
      if (words.empty()) continue;
      for (auto& fragment : split_conjunctions(words)) {
        if (!fragment.empty()) fragments.push_back(std::move(fragment));
      }
    }
    if (fragments.empty()) fragments.push_back(split_words(cleaned));

    copy_subject(fragments);

    std::vector<AtomicFact> atoms;
    std::set<std::string> seen;
    for (const auto& fragment : fragments) {
      const std::string text = join_words(fragment);
      const std::string key = to_lower(normalize_whitespace(text));
      if (text.empty() || !seen.insert(key).second) continue;
      atoms.push_back(AtomicFact{text, source_id, static_cast<int>(atoms.size())});
    }
    return atoms;
  }

private:
  // Prepends the first fragment's subject span to fragments that open with a
  // verb marker. The span keeps the auxiliary when the target fragment opens
  // with a gerund/participle ("Men are" + "talking outside ...").
  static void copy_subject(std::vector<std::vector<std::string>>& fragments) {
    if (fragments.size() < 2) return;
    const std::vector<std::string>& head = fragments.front();
    std::size_t marker = 0;
    while (marker < head.size() && !is_verb_marker(head[marker])) ++marker;
    if (marker == 0 || marker == head.size()) return;

    for (std::size_t i = 1; i < fragments.size(); ++i) {
      std::vector<std::string>& fragment = fragments[i];
      if (fragment.empty() || !is_verb_marker(fragment.front())) continue;
      std::vector<std::string> subject(head.begin(), head.begin() + marker);
      if (!is_auxiliary(fragment.front()) && is_auxiliary(head[marker])) {
        subject.push_back(head[marker]);
      }
      fragment.insert(fragment.begin(), subject.begin(), subject.end());
    }
  }
};

std::string match_case(const std::string& replacement, const std::string& original) {
  if (original.empty() || replacement.empty()) return replacement;
  std::string out = replacement;
  if (std::isupper(static_cast<unsigned char>(original.front()))) {
    out.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
  } else {
    out.front() = static_cast<char>(std::tolower(static_cast<unsigned char>(out.front())));
  }
  return out;
}

class StubGenerator final : public Generator {
public:
  std::string generate_contradiction(const std::string& premise,
                                     const std::string& atom) const override {
    (void)premise;
    std::vector<std::string> words = split_words(normalize_whitespace(atom));
    if (words.empty()) throw InvalidInput("generate: empty atom");

    const std::vector<std::string> first_tokens = tokenize(words.front());
    const std::string first =
        first_tokens.empty() ? to_lower(words.front()) : first_tokens.front();
    if (first == "no") {
      words.front() = match_case("some", words.front());
      return join_words(words);
    }
    if (first == "a" || first == "an" || first == "the" || first == "some") {
      words.front() = match_case("no", words.front());
      return join_words(words);
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::vector<std::string> tokens = tokenize(words[i]);
      if (tokens.size() == 1 &&
          (tokens[0] == "is" || tokens[0] == "are" || tokens[0] == "was" || tokens[0] == "were")) {
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(i) + 1, "not");
        return join_words(words);
      }
    }
    return "No " + join_words(words);
  }
};

}  // namespace

std::shared_ptr<const Classifier> stub_classifier() {
  return std::make_shared<StubClassifier>();
}

std::shared_ptr<const Decomposer> stub_decomposer() {
  return std::make_shared<StubDecomposer>();
}

std::shared_ptr<const Generator> stub_generator() {
  return std::make_shared<StubGenerator>();
}

bool ensemble_contradiction_check(const Ensemble& ensemble, const std::string& premise,
                                  const std::string& candidate, double tau_c) {
  if (ensemble.members.empty()) throw InvalidInput("ensemble has no members");
  for (const auto& member : ensemble.members) {
    const LabelDistribution dist = member->classify(premise, candidate);
    if (argmax_label(dist) != Label::contradiction || !(dist.p_c > tau_c)) return false;
  }
  return true;
}

std::string render_contradiction_prompt(const std::string& premise, const std::string& atom) {
  if (trim(premise).empty()) throw InvalidInput("prompt: empty premise");
  if (trim(atom).empty()) throw InvalidInput("prompt: empty atomic fact");
  std::string prompt =
      "You are a linguistic contradiction generator. Your task is to create a minimally "
      "modified version of a given atomic fact that contradicts the premise, while "
      "maintaining grammaticality and semantic coherence.\n"
      "\n"
      "Instructions:\n"
      "1. Create a contradiction by modifying ONLY 1-2 key elements in the atomic fact.\n"
      "2. Maintain the same grammatical structure and length.\n"
      "3. Ensure the modified fact directly contradicts the premise.\n"
      "4. Keep high lexical similarity with the original fact.\n"
      "5. The contradiction must be clear and unambiguous.\n"
      "\n"
      "Example 1:\n"
      "Premise: A soccer game with multiple males playing.\n"
      "Original Atomic Fact: Some men are playing a sport.\n"
      "Contradiction: No men are playing a sport.\n"
      "\n"
      "Example 2:\n"
      "Premise: A woman is playing the guitar in a park.\n"
      "Original Atomic Fact: A person is playing an instrument.\n"
      "Contradiction: No person is playing an instrument.\n"
      "\n"
      "Task:\n"
      "Premise: " +
      premise +
      "\n"
      "Original Atomic Fact: " +
      atom +
      "\n"
      "Contradiction:";
  return prompt;
}

namespace {

std::string strip_quotes_and_space(std::string text) {
  const auto strippable = [](char c) {
    return c == '"' || c == '\'' || std::isspace(static_cast<unsigned char>(c));
  };
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && strippable(text[begin])) ++begin;
  while (end > begin && strippable(text[end - 1])) --end;
  return text.substr(begin, end - begin);
}

std::string first_nonempty_line(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    const std::string stripped = strip_quotes_and_space(line);
    if (!stripped.empty()) return stripped;
  }
  return "";
}

}  // namespace

std::string parse_generation(const std::string& raw) {
  static const std::string marker = "Contradiction:";
  std::string candidate;
  const std::size_t pos = raw.rfind(marker);
  if (pos != std::string::npos) {
    candidate = first_nonempty_line(raw.substr(pos + marker.size()));
  } else {
    candidate = first_nonempty_line(raw);
  }
  if (candidate.empty()) throw InvalidInput("generation reply contains no usable text");
  return candidate;
}

}  // namespace atomnli

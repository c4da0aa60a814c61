#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "atomnli/aggregate.hpp"
#include "doctest.h"

using namespace atomnli;

namespace {

// Independent oracle: the three inference rules checked literally, one by one.
std::optional<Label> strict_rules_oracle(const std::vector<Label>& labels) {
  const bool every_entailed =
      std::all_of(labels.begin(), labels.end(), [](Label l) { return l == Label::entailment; });
  const bool any_contradiction =
      std::any_of(labels.begin(), labels.end(), [](Label l) { return l == Label::contradiction; });
  const bool any_neutral =
      std::any_of(labels.begin(), labels.end(), [](Label l) { return l == Label::neutral; });
  if (every_entailed) return Label::entailment;
  if (any_contradiction) return Label::contradiction;
  if (any_neutral && !any_contradiction) return Label::neutral;
  return std::nullopt;
}

void enumerate_sequences(int length, std::vector<Label>& current,
                         const std::function<void(const std::vector<Label>&)>& visit) {
  if (length == 0) {
    visit(current);
    return;
  }
  for (Label label : kAllLabels) {
    current.push_back(label);
    enumerate_sequences(length - 1, current, visit);
    current.pop_back();
  }
}

class ScriptedClassifier final : public Classifier {
public:
  explicit ScriptedClassifier(std::map<std::string, LabelDistribution> by_claim)
      : by_claim_(std::move(by_claim)) {}

  std::string name() const override { return "scripted"; }

  LabelDistribution classify(const std::string&, const std::string& claim) const override {
    const auto it = by_claim_.find(claim);
    if (it == by_claim_.end()) throw BackendError("no script for claim: " + claim);
    return it->second;
  }

private:
  std::map<std::string, LabelDistribution> by_claim_;
};

std::vector<AtomicFact> make_atoms(const std::vector<std::string>& texts) {
  std::vector<AtomicFact> atoms;
  for (const std::string& text : texts) {
    atoms.push_back(AtomicFact{text, "inst", static_cast<int>(atoms.size())});
  }
  return atoms;
}

}  // namespace

TEST_CASE("strict aggregation on the published decomposition examples") {
  using L = Label;
  // three entailed atoms -> entailment
  CHECK(aggregate_strict(std::vector<L>{L::entailment, L::entailment, L::entailment}) ==
        L::entailment);
  // one entailed + one neutral -> neutral
  CHECK(aggregate_strict(std::vector<L>{L::entailment, L::neutral}) == L::neutral);
  // any contradiction wins
  CHECK(aggregate_strict(std::vector<L>{L::contradiction, L::entailment, L::neutral}) ==
        L::contradiction);
  // single-atom identity
  CHECK(aggregate_strict(std::vector<L>{L::entailment}) == L::entailment);
  CHECK_THROWS_AS(aggregate_strict(std::vector<L>{}), InvalidInput);
}

TEST_CASE("strict aggregation matches the three-rule oracle on all 363 short sequences") {
  int checked = 0;
  for (int length = 1; length <= 5; ++length) {
    std::vector<Label> current;
    enumerate_sequences(length, current, [&](const std::vector<Label>& labels) {
      const auto expected = strict_rules_oracle(labels);
      REQUIRE(expected.has_value());  // the three rules are exhaustive
      CHECK(aggregate_strict(labels) == *expected);
      ++checked;
    });
  }
  CHECK(checked == 363);
}

TEST_CASE("strict aggregation is order-invariant and duplication-idempotent") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 300; ++round) {
    std::vector<Label> labels;
    const std::size_t size = 1 + rng() % 6;
    for (std::size_t i = 0; i < size; ++i) {
      labels.push_back(kAllLabels[rng() % 3]);
    }
    const Label base = aggregate_strict(labels);

    std::vector<Label> shuffled = labels;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(aggregate_strict(shuffled) == base);

    std::vector<Label> duplicated = labels;
    duplicated.push_back(labels[rng() % labels.size()]);
    CHECK(aggregate_strict(duplicated) == base);

    std::vector<Label> with_contradiction = labels;
    with_contradiction.push_back(Label::contradiction);
    CHECK(aggregate_strict(with_contradiction) == Label::contradiction);

    std::vector<Label> with_entailment = labels;
    with_entailment.push_back(Label::entailment);
    CHECK(aggregate_strict(with_entailment) == base);
  }
}

TEST_CASE("probability summation on fixed fixtures") {
  SUBCASE("single one-hot atom") {
    const auto [label, summed] =
        aggregate_sum(std::vector<LabelDistribution>{{1.0, 0.0, 0.0}});
    CHECK(label == Label::entailment);
    CHECK(summed.s_e == 1.0);
    CHECK(summed.s_n == 0.0);
    CHECK(summed.s_c == 0.0);
  }
  SUBCASE("two atoms, expected values from independent component-wise addition") {
    const std::vector<LabelDistribution> dists{{0.7, 0.2, 0.1}, {0.2, 0.6, 0.2}};
    const auto [label, summed] = aggregate_sum(dists);
    CHECK(label == Label::entailment);
    CHECK(summed.s_e == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(summed.s_n == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(summed.s_c == doctest::Approx(0.3).epsilon(1e-12));
  }
  SUBCASE("three atoms") {
    const std::vector<LabelDistribution> dists{
        {0.6, 0.3, 0.1}, {0.1, 0.2, 0.7}, {0.3, 0.3, 0.4}};
    const auto [label, summed] = aggregate_sum(dists);
    CHECK(label == Label::contradiction);
    CHECK(summed.s_e == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(summed.s_n == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(summed.s_c == doctest::Approx(1.2).epsilon(1e-12));
  }
  CHECK_THROWS_AS(aggregate_sum(std::vector<LabelDistribution>{}), InvalidInput);
}

TEST_CASE("probability summation is exactly permutation-invariant") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int round = 0; round < 500; ++round) {
    std::vector<LabelDistribution> dists;
    const std::size_t size = 1 + rng() % 6;
    for (std::size_t i = 0; i < size; ++i) {
      double a = uniform(rng), b = uniform(rng), c = uniform(rng);
      const double total = a + b + c;
      dists.push_back(LabelDistribution{a / total, b / total, c / total});
    }
    const auto [label, summed] = aggregate_sum(dists);

    std::vector<LabelDistribution> shuffled = dists;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto [shuffled_label, shuffled_sum] = aggregate_sum(shuffled);

    CHECK(shuffled_label == label);
    CHECK(shuffled_sum.s_e == summed.s_e);  // bit-exact, not approximate
    CHECK(shuffled_sum.s_n == summed.s_n);
    CHECK(shuffled_sum.s_c == summed.s_c);

    if (size == 1) CHECK(label == argmax_label(dists.front()));
  }
}

TEST_CASE("on one-hot inputs summation reduces to majority vote") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 400; ++round) {
    std::vector<LabelDistribution> dists;
    std::array<int, 3> votes{};
    const std::size_t size = 1 + rng() % 7;
    for (std::size_t i = 0; i < size; ++i) {
      const Label label = kAllLabels[rng() % 3];
      ++votes[static_cast<std::size_t>(label)];
      dists.push_back(LabelDistribution::one_hot(label));
    }
    // majority with the declared precedence on ties
    Label majority = Label::entailment;
    for (Label label : {Label::neutral, Label::contradiction}) {
      const std::size_t l = static_cast<std::size_t>(label);
      const std::size_t m = static_cast<std::size_t>(majority);
      if (votes[l] > votes[m] ||
          (votes[l] == votes[m] && label_precedence(label) > label_precedence(majority))) {
        majority = label;
      }
    }
    CHECK(aggregate_sum(dists).first == majority);
  }
}

TEST_CASE("strict and sum deliberately diverge on one-hot [E, E, C]") {
  const std::vector<LabelDistribution> dists{LabelDistribution::one_hot(Label::entailment),
                                             LabelDistribution::one_hot(Label::entailment),
                                             LabelDistribution::one_hot(Label::contradiction)};
  std::vector<Label> labels;
  for (const auto& d : dists) labels.push_back(argmax_label(d));

  CHECK(aggregate_strict(labels) == Label::contradiction);
  CHECK(aggregate_sum(dists).first == Label::entailment);
}

TEST_CASE("judge composes classifier outputs in atom order") {
  const std::string premise =
      "A blond woman is looking at a camera that a brunette woman is holding in front of a "
      "wall with several pieces of art on it.";
  const std::vector<std::string> texts = {
      "A blond woman is holding a camera.",
      "A blond woman is looking at a wall.",
      "The wall has several pieces of sharks on it.",
  };
  const ScriptedClassifier classifier({
      {texts[0], LabelDistribution::one_hot(Label::contradiction)},
      {texts[1], LabelDistribution::one_hot(Label::entailment)},
      {texts[2], LabelDistribution::one_hot(Label::neutral)},
  });
  const std::vector<AtomicFact> atoms = make_atoms(texts);

  for (int workers : {1, 4}) {
    const Verdict verdict = judge(premise, atoms, classifier, AggregationMode::strict, workers);
    CHECK(verdict.aggregated == Label::contradiction);
    REQUIRE(verdict.atom_labels.size() == 3);
    CHECK(verdict.atom_labels[0] == Label::contradiction);
    CHECK(verdict.atom_labels[1] == Label::entailment);
    CHECK(verdict.atom_labels[2] == Label::neutral);
    CHECK(!verdict.summed.has_value());
  }
}

TEST_CASE("judge single neutral atom agrees across modes") {
  const ScriptedClassifier classifier({{"an atom", LabelDistribution::one_hot(Label::neutral)}});
  const std::vector<AtomicFact> atoms = make_atoms({"an atom"});

  CHECK(judge("p", atoms, classifier, AggregationMode::strict).aggregated == Label::neutral);
  const Verdict sum_verdict = judge("p", atoms, classifier, AggregationMode::sum);
  CHECK(sum_verdict.aggregated == Label::neutral);
  REQUIRE(sum_verdict.summed.has_value());
  CHECK(sum_verdict.summed->s_n == 1.0);
}

TEST_CASE("judge names the failing atom index") {
  const ScriptedClassifier classifier({{"good", LabelDistribution::one_hot(Label::entailment)}});
  const std::vector<AtomicFact> atoms = make_atoms({"good", "missing"});

  CHECK_THROWS_WITH_AS(judge("p", atoms, classifier, AggregationMode::strict),
                       doctest::Contains("atom 1"), BackendError);
  CHECK_THROWS_WITH_AS(judge("p", atoms, classifier, AggregationMode::strict, 4),
                       doctest::Contains("atom 1"), BackendError);
  CHECK_THROWS_AS(judge("p", std::vector<AtomicFact>{}, classifier, AggregationMode::strict),
                  InvalidInput);
}

TEST_CASE("verdict serializes to the documented JSON shape") {
  const ScriptedClassifier classifier({{"an atom", LabelDistribution{0.2, 0.3, 0.5}}});
  const std::vector<AtomicFact> atoms = make_atoms({"an atom"});

  const Verdict strict_verdict = judge("p", atoms, classifier, AggregationMode::strict);
  const nlohmann::ordered_json strict_json = verdict_to_json(strict_verdict);
  CHECK(strict_json["id"] == "inst");
  CHECK(strict_json["mode"] == "strict");
  CHECK(strict_json["aggregated"] == "contradiction");
  CHECK(strict_json["summed"].is_null());
  REQUIRE(strict_json["atoms"].size() == 1);
  CHECK(strict_json["atoms"][0]["text"] == "an atom");
  CHECK(strict_json["atoms"][0]["label"] == "contradiction");
  CHECK(strict_json["atoms"][0]["p_c"] == 0.5);

  const Verdict sum_verdict = judge("p", atoms, classifier, AggregationMode::sum);
  const nlohmann::ordered_json sum_json = verdict_to_json(sum_verdict);
  CHECK(sum_json["summed"]["s_c"] == 0.5);
}

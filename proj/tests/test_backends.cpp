#include <memory>
#include <set>

#include "atomnli/backends.hpp"
#include "doctest.h"

using namespace atomnli;

namespace {

bool same_dist(const LabelDistribution& a, const LabelDistribution& b) {
  return a.p_e == b.p_e && a.p_n == b.p_n && a.p_c == b.p_c;
}

class ConstantClassifier final : public Classifier {
public:
  explicit ConstantClassifier(LabelDistribution dist) : dist_(dist) {}
  std::string name() const override { return "constant"; }
  LabelDistribution classify(const std::string&, const std::string&) const override {
    return dist_;
  }

private:
  LabelDistribution dist_;
};

}  // namespace

TEST_CASE("stub classifier frozen output triples") {
  const auto classifier = stub_classifier();

  SUBCASE("full overlap is entailment") {
    const LabelDistribution dist = classifier->classify("a man runs", "a man runs");
    CHECK(same_dist(dist, LabelDistribution{0.80, 0.15, 0.05}));
    CHECK(argmax_label(dist) == Label::entailment);
  }
  SUBCASE("negation asymmetry is contradiction") {
    const LabelDistribution dist = classifier->classify("a man runs", "no man runs");
    CHECK(same_dist(dist, LabelDistribution{0.05, 0.15, 0.80}));
    CHECK(argmax_label(dist) == Label::contradiction);
    // and the symmetric direction
    const LabelDistribution reverse = classifier->classify("no man runs", "a man runs");
    CHECK(argmax_label(reverse) == Label::contradiction);
    // matching negations cancel out
    const LabelDistribution matched = classifier->classify("no man runs", "no man runs");
    CHECK(argmax_label(matched) == Label::entailment);
    // contracted negation counts
    const LabelDistribution contracted = classifier->classify("a man runs", "a man doesn't run");
    CHECK(argmax_label(contracted) == Label::contradiction);
  }
  SUBCASE("low overlap is neutral") {
    // claim tokens {a, dog, sleeps, quietly}; only "a" appears in the premise,
    // overlap 1/4 < 0.75
    const LabelDistribution dist = classifier->classify("a man runs", "a dog sleeps quietly");
    CHECK(same_dist(dist, LabelDistribution{0.15, 0.70, 0.15}));
    CHECK(argmax_label(dist) == Label::neutral);
  }
  SUBCASE("overlap boundary sits at 0.75 inclusive") {
    // {a, man, runs} of {a, man, runs, fast}: 3/4 == 0.75 -> entailment
    const LabelDistribution at = classifier->classify("a man runs", "a man runs fast");
    CHECK(argmax_label(at) == Label::entailment);
    // 2/4 < 0.75 -> neutral
    const LabelDistribution below = classifier->classify("a man runs", "a man sits down");
    CHECK(argmax_label(below) == Label::neutral);
  }
  SUBCASE("empty claim is rejected") {
    CHECK_THROWS_AS(classifier->classify("a man runs", ""), InvalidInput);
    CHECK_THROWS_AS(classifier->classify("a man runs", " !! "), InvalidInput);
  }
  SUBCASE("outputs are valid distributions and deterministic") {
    for (const char* claim : {"a man runs", "no dogs", "totally unrelated words"}) {
      const LabelDistribution first = classifier->classify("a man runs", claim);
      CHECK_NOTHROW(first.validate());
      CHECK(same_dist(first, classifier->classify("a man runs", claim)));
    }
  }
  SUBCASE("batch equals element-wise classify") {
    const std::vector<PremiseClaim> pairs = {{"a man runs", "a man runs"},
                                             {"a man runs", "no man runs"},
                                             {"a man runs", "a dog sleeps quietly"}};
    const std::vector<LabelDistribution> batch = classifier->classify_batch(pairs);
    REQUIRE(batch.size() == pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      CHECK(same_dist(batch[i], classifier->classify(pairs[i].premise, pairs[i].claim)));
    }
  }
}

TEST_CASE("stub decomposer splitting behaviour") {
  const auto decomposer = stub_decomposer();

  SUBCASE("single conjunction between clauses") {
    const auto atoms = decomposer->decompose("A man is running and a dog is barking", "i1");
    REQUIRE(atoms.size() == 2);
    CHECK(atoms[0].text == "A man is running");
    CHECK(atoms[1].text == "a dog is barking");
    CHECK(atoms[0].source_id == "i1");
    CHECK(atoms[1].index == 1);
  }
  SUBCASE("no split point returns the hypothesis unchanged") {
    const auto atoms = decomposer->decompose("A girl is swinging", "i2");
    REQUIRE(atoms.size() == 1);
    CHECK(atoms[0].text == "A girl is swinging");
  }
  SUBCASE("gerund conjunct borrows the subject and auxiliary") {
    const auto atoms =
        decomposer->decompose("Men are throwing books and talking outside in a courtyard", "i3");
    REQUIRE(atoms.size() == 2);
    CHECK(atoms[0].text == "Men are throwing books");
    CHECK(atoms[1].text == "Men are talking outside in a courtyard");
  }
  SUBCASE("noun-phrase and does not split") {
    const auto atoms = decomposer->decompose("Men are throwing books and balls", "i4");
    REQUIRE(atoms.size() == 1);
    CHECK(atoms[0].text == "Men are throwing books and balls");
  }
  SUBCASE("relative clause splits off with the subject copied") {
    const auto atoms = decomposer->decompose("A man is holding a camera, which is black", "i5");
    REQUIRE(atoms.size() == 2);
    CHECK(atoms[0].text == "A man is holding a camera");
    CHECK(atoms[1].text == "A man is black");
  }
  SUBCASE("duplicate fragments are removed") {
    const auto atoms =
        decomposer->decompose("A man is running and a man is running", "i6");
    CHECK(atoms.size() == 1);
  }
  SUBCASE("empty hypothesis is rejected") {
    CHECK_THROWS_AS(decomposer->decompose("", "i7"), InvalidInput);
    CHECK_THROWS_AS(decomposer->decompose("   ", "i7"), InvalidInput);
  }
  SUBCASE("atoms are deterministic, non-empty and distinct") {
    const char* hypotheses[] = {
        "A man is running and a dog is barking",
        "Men are throwing books and talking outside in a courtyard",
        "The woman, who is smiling, is reading and walking",
    };
    for (const char* hypothesis : hypotheses) {
      const auto first = decomposer->decompose(hypothesis, "x");
      const auto second = decomposer->decompose(hypothesis, "x");
      REQUIRE(first.size() == second.size());
      std::set<std::string> seen;
      for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].text == second[i].text);
        CHECK(!trim(first[i].text).empty());
        CHECK(seen.insert(to_lower(normalize_whitespace(first[i].text))).second);
      }
    }
  }
}

TEST_CASE("stub generator produces distinct negated candidates") {
  const auto generator = stub_generator();
  CHECK(generator->generate_contradiction("p", "Some men are playing a sport") ==
        "No men are playing a sport");
  CHECK(generator->generate_contradiction("p", "A person is playing an instrument") ==
        "No person is playing an instrument");
  CHECK(generator->generate_contradiction("p", "No dogs are barking") ==
        "Some dogs are barking");
  CHECK(generator->generate_contradiction("p", "Men are talking outside") ==
        "Men are not talking outside");
  CHECK(generator->generate_contradiction("p", "People run") == "No People run");

  for (const char* atom : {"Some men are playing", "no one runs", "Men are talking", "People"}) {
    const std::string candidate = generator->generate_contradiction("p", atom);
    CHECK(!candidate.empty());
    CHECK(candidate != atom);
  }
}

TEST_CASE("ensemble contradiction check requires every member to agree") {
  const auto contra = std::make_shared<ConstantClassifier>(LabelDistribution{0.1, 0.1, 0.8});
  const auto neutralish = std::make_shared<ConstantClassifier>(LabelDistribution{0.2, 0.5, 0.3});
  const auto weak_contra = std::make_shared<ConstantClassifier>(LabelDistribution{0.1, 0.35, 0.55});

  SUBCASE("two agreeing members pass") {
    const Ensemble ensemble{{contra, contra}};
    CHECK(ensemble_contradiction_check(ensemble, "p", "c", 0.5));
  }
  SUBCASE("one dissenting member fails the pair") {
    const Ensemble ensemble{{contra, neutralish}};
    CHECK_FALSE(ensemble_contradiction_check(ensemble, "p", "c", 0.5));
  }
  SUBCASE("confidence threshold is strict") {
    const Ensemble ensemble{{weak_contra}};
    CHECK_FALSE(ensemble_contradiction_check(ensemble, "p", "c", 0.6));
    CHECK(ensemble_contradiction_check(ensemble, "p", "c", 0.5));
    // exactly at the threshold fails the strict comparison
    const auto at = std::make_shared<ConstantClassifier>(LabelDistribution{0.1, 0.1, 0.8});
    CHECK_FALSE(ensemble_contradiction_check(Ensemble{{at}}, "p", "c", 0.8));
  }
  SUBCASE("empty ensemble is rejected") {
    CHECK_THROWS_AS(ensemble_contradiction_check(Ensemble{}, "p", "c", 0.5), InvalidInput);
  }
  SUBCASE("removing a member never flips true to false") {
    std::vector<std::shared_ptr<const Classifier>> pool = {contra, weak_contra, neutralish,
                                                           contra};
    for (std::size_t subset = 1; subset < (1u << pool.size()); ++subset) {
      Ensemble ensemble;
      for (std::size_t bit = 0; bit < pool.size(); ++bit) {
        if (subset & (1u << bit)) ensemble.members.push_back(pool[bit]);
      }
      if (!ensemble_contradiction_check(ensemble, "p", "c", 0.5)) continue;
      // every non-empty sub-ensemble must also pass
      for (std::size_t sub = 1; sub < (1u << pool.size()); ++sub) {
        if ((sub & subset) != sub) continue;
        Ensemble smaller;
        for (std::size_t bit = 0; bit < pool.size(); ++bit) {
          if (sub & (1u << bit)) smaller.members.push_back(pool[bit]);
        }
        CHECK(ensemble_contradiction_check(smaller, "p", "c", 0.5));
      }
    }
  }
}

TEST_CASE("contradiction prompt renders the full template") {
  const std::string prompt =
      render_contradiction_prompt("A soccer game with multiple males playing.",
                                  "Some men are playing a sport.");
  CHECK(prompt.find("No men are playing a sport.") != std::string::npos);
  CHECK(prompt.find("No person is playing an instrument.") != std::string::npos);
  CHECK(prompt.find("ONLY 1-2 key elements") != std::string::npos);
  CHECK(prompt.find("Premise: A soccer game with multiple males playing.") != std::string::npos);
  CHECK(prompt.find("Original Atomic Fact: Some men are playing a sport.") != std::string::npos);
  CHECK(prompt.ends_with("Contradiction:"));

  CHECK_THROWS_AS(render_contradiction_prompt("", "a"), InvalidInput);
  CHECK_THROWS_AS(render_contradiction_prompt("p", "  "), InvalidInput);
}

TEST_CASE("generation replies are parsed from the marker or the first line") {
  CHECK(parse_generation("Contradiction: No men are playing a sport.") ==
        "No men are playing a sport.");
  CHECK(parse_generation("No person is playing an instrument.") ==
        "No person is playing an instrument.");
  CHECK(parse_generation("noise\nContradiction:\n  \"No dogs bark.\"  \n") == "No dogs bark.");
  CHECK(parse_generation("\n\n  first real line\nsecond line") == "first real line");
  CHECK_THROWS_AS(parse_generation(""), InvalidInput);
  CHECK_THROWS_AS(parse_generation("Contradiction:   "), InvalidInput);
}

#pragma once

// Shared 30-instance corpus for the pipeline tests: ten instances per gold
// label, with atoms crafted so the word-overlap stub classifier produces a
// mix of entailment, neutral and contradiction scores, and with enough
// shared vocabulary that BM25 retrieval connects instances.

#include <fstream>
#include <string>
#include <vector>

#include "atomnli/core.hpp"
#include "json.hpp"

namespace fixture {

struct Row {
  const char* id;
  const char* premise;
  atomnli::Label gold;
  std::vector<const char*> atoms;
};

inline const std::vector<Row>& rows() {
  using atomnli::Label;
  static const std::vector<Row> rows = {
      {"e01", "A man is running in the park", Label::entailment,
       {"A man is running in the park", "the park is very green"}},
      {"e02", "Two dogs are playing with a ball", Label::entailment,
       {"Two dogs are playing", "a ball is bright red"}},
      {"e03", "A woman is reading a book on the bench", Label::entailment,
       {"A woman is reading a book", "the bench is near a fountain"}},
      {"e04", "Children are swimming in the pool", Label::entailment,
       {"Children are swimming", "the pool is very warm today"}},
      {"e05", "A girl is swinging on a swing", Label::entailment,
       {"A girl is swinging", "the swing has blue ropes"}},
      {"e06", "A boy in a blue shirt is jumping", Label::entailment,
       {"A boy is jumping", "the shirt is blue"}},
      {"e07", "An old man is sitting on a chair", Label::entailment,
       {"An old man is sitting", "the chair is made of wood"}},
      {"e08", "A group of people are dancing outside", Label::entailment,
       {"A group of people are dancing", "music is playing loudly"}},
      {"e09", "The chef is cooking pasta in the kitchen", Label::entailment,
       {"The chef is cooking pasta", "dinner will be served soon"}},
      {"e10", "A cyclist is riding along the road", Label::entailment,
       {"A cyclist is riding", "the road is wet"}},

      {"n01", "A group of swimmers jump into a pool", Label::neutral,
       {"A group of swimmers jump into a pool", "The jump occurs during a swim meet"}},
      {"n02", "A man is standing near the lake", Label::neutral,
       {"A man is waiting for his friend", "A man is standing"}},
      {"n03", "Two children are building a sandcastle", Label::neutral,
       {"The children are siblings", "Two children are building"}},
      {"n04", "A dog is barking at the gate", Label::neutral,
       {"The dog wants to go outside", "A dog is barking"}},
      {"n05", "A street musician is playing the guitar", Label::neutral,
       {"The musician plays for money", "A musician is playing the guitar"}},
      {"n06", "People are waiting at the bus stop", Label::neutral,
       {"The bus is running late", "People are waiting"}},
      {"n07", "A woman in a hat walks through the market", Label::neutral,
       {"The woman is shopping for fruit", "A woman walks through the market"}},
      {"n08", "Kids are flying kites on the hill", Label::neutral,
       {"It is a windy afternoon", "Kids are flying kites"}},
      {"n09", "A fisherman sits by the river", Label::neutral,
       {"The fisherman caught three fish", "A fisherman sits by the river"}},
      {"n10", "Workers are painting the fence", Label::neutral,
       {"The paint is fresh and white", "Workers are painting"}},

      {"c01", "A group of men are sitting and reading books in a courtyard",
       Label::contradiction, {"No men are reading books", "Men are in a courtyard"}},
      {"c02", "A soccer game with multiple males playing", Label::contradiction,
       {"No men are playing a sport", "A soccer game is happening"}},
      {"c03", "A woman is playing the guitar in a park", Label::contradiction,
       {"The woman is not playing music", "A woman is in a park"}},
      {"c04", "Children are swimming in the lake", Label::contradiction,
       {"The children never go swimming", "Children are in the lake"}},
      {"c05", "A man is holding a camera", Label::contradiction,
       {"The man is not holding anything", "A man is holding a camera"}},
      {"c06", "The team is winning the game", Label::contradiction,
       {"The team is not winning", "The team is playing the game"}},
      {"c07", "A bird is flying over the water", Label::contradiction,
       {"No bird is flying", "A bird is near the water"}},
      {"c08", "Students are studying in the library", Label::contradiction,
       {"The students aren't studying", "Students are in the library"}},
      {"c09", "A horse is pulling the cart", Label::contradiction,
       {"The horse is never pulling anything", "A horse is pulling the cart"}},
      {"c10", "The sun is shining brightly", Label::contradiction,
       {"There is no sun today", "The sun is shining"}},
  };
  return rows;
}

/// Instances with atoms attached directly (no decomposer involved).
inline std::vector<atomnli::SentenceInstance> instances() {
  std::vector<atomnli::SentenceInstance> out;
  for (const Row& row : rows()) {
    atomnli::SentenceInstance instance;
    instance.id = row.id;
    instance.premise = row.premise;
    instance.gold = row.gold;
    std::string hypothesis;
    for (const char* atom : row.atoms) {
      if (!hypothesis.empty()) hypothesis += " and ";
      hypothesis += atom;
      instance.atoms.push_back(
          atomnli::AtomicFact{atom, instance.id, static_cast<int>(instance.atoms.size())});
    }
    instance.hypothesis = hypothesis;
    out.push_back(std::move(instance));
  }
  return out;
}

inline std::vector<atomnli::SentenceInstance> gold_entailment_instances() {
  std::vector<atomnli::SentenceInstance> out;
  for (atomnli::SentenceInstance& instance : instances()) {
    if (instance.gold == atomnli::Label::entailment) out.push_back(std::move(instance));
  }
  return out;
}

/// SNLI-style JSONL file (id, premise, hypothesis, label).
inline void write_snli_jsonl(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  for (const atomnli::SentenceInstance& instance : instances()) {
    nlohmann::ordered_json object;
    object["id"] = instance.id;
    object["premise"] = instance.premise;
    object["hypothesis"] = instance.hypothesis;
    object["label"] = std::string(atomnli::to_string(instance.gold));
    file << object.dump() << '\n';
  }
}

/// Grouped JSONL file (id, premise, hypothesis, label, atoms).
inline void write_grouped_jsonl(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  for (const atomnli::SentenceInstance& instance : instances()) {
    nlohmann::ordered_json object;
    object["id"] = instance.id;
    object["premise"] = instance.premise;
    object["hypothesis"] = instance.hypothesis;
    object["label"] = std::string(atomnli::to_string(instance.gold));
    object["atoms"] = nlohmann::ordered_json::array();
    for (const atomnli::AtomicFact& atom : instance.atoms) object["atoms"].push_back(atom.text);
    file << object.dump() << '\n';
  }
}

}  // namespace fixture

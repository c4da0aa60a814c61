#include "atomnli/io.hpp"

#include <fstream>

#include "json.hpp"

namespace atomnli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_line(const std::string& line, const std::string& path, std::size_t line_no) {
  json parsed = json::parse(line, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw InvalidInput(path + ": line " + std::to_string(line_no) + " is not a JSON object");
  }
  return parsed;
}

std::string require_string(const json& object, const char* key, const std::string& path,
                           std::size_t line_no) {
  if (!object.contains(key) || !object[key].is_string()) {
    throw InvalidInput(path + ": line " + std::to_string(line_no) + " is missing string field \"" +
                       key + "\"");
  }
  return object[key].get<std::string>();
}

template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    fn(line, line_no);
  }
}

Label parse_label_at(const std::string& text, const std::string& path, std::size_t line_no) {
  try {
    return parse_label(text);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": line " + std::to_string(line_no) + ": " + e.what());
  }
}

}  // namespace

std::vector<SentenceInstance> read_snli_jsonl(const std::string& path) {
  std::vector<SentenceInstance> instances;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    const json object = parse_line(line, path, line_no);
    SentenceInstance instance;
    instance.id = require_string(object, "id", path, line_no);
    instance.premise = require_string(object, "premise", path, line_no);
    instance.hypothesis = require_string(object, "hypothesis", path, line_no);
    instance.gold = parse_label_at(require_string(object, "label", path, line_no), path, line_no);
    instances.push_back(std::move(instance));
  });
  return instances;
}

std::vector<SentenceInstance> read_grouped_jsonl(const std::string& path, bool require_atoms) {
  std::vector<SentenceInstance> instances;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    const json object = parse_line(line, path, line_no);
    SentenceInstance instance;
    instance.id = require_string(object, "id", path, line_no);
    instance.premise = require_string(object, "premise", path, line_no);
    instance.hypothesis = require_string(object, "hypothesis", path, line_no);
    instance.gold = parse_label_at(require_string(object, "label", path, line_no), path, line_no);
    if (object.contains("atoms")) {
      if (!object["atoms"].is_array()) {
        throw InvalidInput(path + ": line " + std::to_string(line_no) + ": atoms must be an array");
      }
      for (const json& atom : object["atoms"]) {
        if (!atom.is_string() || trim(atom.get<std::string>()).empty()) {
          throw InvalidInput(path + ": line " + std::to_string(line_no) +
                             ": atoms must be non-empty strings");
        }
        instance.atoms.push_back(AtomicFact{atom.get<std::string>(), instance.id,
                                            static_cast<int>(instance.atoms.size())});
      }
    }
    if (require_atoms && instance.atoms.empty()) {
      throw InvalidInput(path + ": line " + std::to_string(line_no) +
                         ": instance has no atoms");
    }
    instances.push_back(std::move(instance));
  });
  return instances;
}

void write_grouped_jsonl(const std::string& path, std::span<const SentenceInstance> instances) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot write " + path);
  for (const SentenceInstance& instance : instances) {
    ordered_json object;
    object["id"] = instance.id;
    object["premise"] = instance.premise;
    object["hypothesis"] = instance.hypothesis;
    object["label"] = std::string(to_string(instance.gold));
    object["atoms"] = ordered_json::array();
    for (const AtomicFact& atom : instance.atoms) object["atoms"].push_back(atom.text);
    file << object.dump() << '\n';
  }
}

std::vector<AtomicInstance> read_atomic_jsonl(const std::string& path) {
  std::vector<AtomicInstance> instances;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    const json object = parse_line(line, path, line_no);
    AtomicInstance instance;
    instance.id = require_string(object, "id", path, line_no);
    instance.premise = require_string(object, "premise", path, line_no);
    instance.atom = require_string(object, "atom", path, line_no);
    instance.label = parse_label_at(require_string(object, "label", path, line_no), path, line_no);
    try {
      instance.provenance = parse_provenance(require_string(object, "provenance", path, line_no));
      instance.validate();
    } catch (const InvalidInput& e) {
      throw InvalidInput(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    instances.push_back(std::move(instance));
  });
  return instances;
}

void write_atomic_jsonl(const std::string& path, std::span<const AtomicInstance> instances) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot write " + path);
  for (const AtomicInstance& instance : instances) {
    ordered_json object;
    object["id"] = instance.id;
    object["premise"] = instance.premise;
    object["atom"] = instance.atom;
    object["label"] = std::string(to_string(instance.label));
    object["provenance"] = std::string(to_string(instance.provenance));
    file << object.dump() << '\n';
  }
}

}  // namespace atomnli

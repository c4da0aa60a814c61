#pragma once

#include <span>
#include <string>
#include <vector>

#include "atomnli/core.hpp"

namespace atomnli {

// JSON Lines readers and writers. Required fields are checked per line and
// errors carry the 1-based line number; unknown keys in data files are
// ignored so converted corpora with extra annotations still load.

/// {id, premise, hypothesis, label} — instances come back without atoms.
std::vector<SentenceInstance> read_snli_jsonl(const std::string& path);

/// {id, premise, hypothesis, label, atoms: [string]}.
/// require_atoms demands a non-empty atoms array on every line.
std::vector<SentenceInstance> read_grouped_jsonl(const std::string& path, bool require_atoms);

void write_grouped_jsonl(const std::string& path, std::span<const SentenceInstance> instances);

/// {id, premise, atom, label, provenance}.
std::vector<AtomicInstance> read_atomic_jsonl(const std::string& path);

void write_atomic_jsonl(const std::string& path, std::span<const AtomicInstance> instances);

}  // namespace atomnli

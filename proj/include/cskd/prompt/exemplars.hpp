#pragma once

#include <istream>
#include <string>
#include <vector>

#include "cskd/core/relation.hpp"

namespace cskd {

enum class PromptMode { kConceptualization, kInstantiation };

std::string_view to_string(PromptMode m);

// One worked example shown to the generator.
struct Exemplar {
  std::string head_bracketed;  // focus span in []
  Relation relation = Relation::kXEffect;
  std::string tail;
  std::string answer;  // c for conceptualization, i' for instantiation

  friend bool operator==(const Exemplar&, const Exemplar&) = default;
};

struct ExemplarSet {
  PromptMode mode = PromptMode::kConceptualization;
  std::string task_prompt;
  std::string version;
  std::vector<Exemplar> exemplars;

  // Keeps the first n exemplars (prompt size N = n + 1).
  ExemplarSet truncated(std::size_t n) const;

  friend bool operator==(const ExemplarSet&, const ExemplarSet&) = default;
};

// Default exemplar counts: 5 worked examples plus the query for
// conceptualization, 10 plus the query for instantiation.
inline constexpr std::size_t kDefaultConceptExemplars = 5;
inline constexpr std::size_t kDefaultInstanceExemplars = 10;

// JSONL: header {"mode","task_prompt","version"} then one
// {"head_bracketed","relation","tail","answer"} per line. Throws
// cskd::Error on an empty file or a malformed entry; entries are named by
// 1-based exemplar index.
ExemplarSet load_exemplars(std::istream& in);
ExemplarSet load_exemplars_file(const std::string& path);

// The sets shipped in data/exemplars/, compiled in.
const ExemplarSet& default_exemplars(PromptMode mode);

}  // namespace cskd

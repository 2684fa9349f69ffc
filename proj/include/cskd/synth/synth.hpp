#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "cskd/core/records.hpp"
#include "cskd/core/templates.hpp"
#include "cskd/core/triple.hpp"

namespace cskd {

enum class Label { kPositive, kNegative };
enum class DiscTask { kEventDisc, kTripleDisc };

std::string_view to_string(Label l);
std::string_view to_string(DiscTask t);

struct LabeledPair {
  std::string text_a;
  std::string text_b;
  Label label = Label::kPositive;
  DiscTask task = DiscTask::kEventDisc;

  // text_a and text_b joined as one declarative statement.
  std::string statement() const;

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

struct QAItem {
  std::string question;
  std::vector<std::string> options;
  std::size_t gold_index = 0;

  friend bool operator==(const QAItem&, const QAItem&) = default;
};

struct CometPair {
  std::string source;
  std::string target;

  friend bool operator==(const CometPair&, const CometPair&) = default;
};

struct SkipEntry {
  std::string item_id;
  std::string reason;

  friend bool operator==(const SkipEntry&, const SkipEntry&) = default;
};

struct DiscResult {
  std::vector<LabeledPair> pairs;  // positive, negative, positive, negative, ...
  std::vector<SkipEntry> skipped;
};

struct QAResult {
  std::vector<QAItem> items;
  std::vector<SkipEntry> skipped;
};

inline constexpr int kMaxResampleAttempts = 50;
inline constexpr std::size_t kDefaultOptionCount = 3;

// Unbiased index in [0, n) from a 64-bit engine; identical on every
// platform, unlike std::uniform_int_distribution.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

// Event discrimination. Positive: (h_o, "<Instance> is a <c>."). Negative:
// the same head with a concept from another head event that shares no
// content token with h_o and is not one of h_o's own concepts. A record
// whose negative cannot be found in kMaxResampleAttempts draws is skipped
// entirely, keeping the output balanced.
DiscResult synth_event_disc(const std::vector<ConceptRecord>& records, std::uint64_t seed);

// Triple discrimination. Positive: ("<head>, <connective>", tail).
// Negative: a tail of another head under the same relation with no content
// token in common with the head.
DiscResult synth_triple_disc(const std::vector<Triple>& triples, std::uint64_t seed,
                             const TemplateTable& templates = TemplateTable::defaults());

// Source "<head>, <connective>", target = tail.
std::vector<CometPair> synth_comet_lines(const std::vector<Triple>& triples,
                                         const TemplateTable& templates = TemplateTable::defaults());

struct QAOptions {
  std::size_t option_count = kDefaultOptionCount;
  std::uint64_t seed = 0;
  // Draw distractors from the item's own relation only.
  bool stratify_by_relation = false;
};

// Question "<head>, <connective>", gold = tail, option_count - 1
// distractor tails sharing no content token with the head; options are
// pairwise distinct and the gold position is uniform.
QAResult synth_qa_pairs(const std::vector<Triple>& triples, const QAOptions& options = {},
                        const TemplateTable& templates = TemplateTable::defaults());

// n triples without replacement; with `stratify`, each relation gets a
// share proportional to its frequency (largest remainder). Order follows
// the input.
std::vector<Triple> sample_triples(const std::vector<Triple>& triples, std::size_t n,
                                   std::uint64_t seed, bool stratify = false);

// Triples (h, r, t) from records: h_a for concepts, h_{i'} for
// instantiations.
std::vector<Triple> record_triples(const std::vector<AnyRecord>& records);

nlohmann::ordered_json to_json(const LabeledPair& p);
nlohmann::ordered_json to_json(const QAItem& q);
nlohmann::ordered_json to_json(const CometPair& c);
nlohmann::ordered_json to_json(const SkipEntry& s);

template <class T>
std::size_t write_jsonl(const std::vector<T>& items, std::ostream& out) {
  for (const auto& x : items) out << to_json(x).dump() << '\n';
  return items.size();
}

}  // namespace cskd

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cskd/core/records.hpp"

namespace cskd {

// A per-item failure that did not stop the round.
struct ErrorEntry {
  std::string stage;  // conceptualize | score_concept | instantiate | score_instantiation
  std::string item_id;
  std::string message;

  friend bool operator==(const ErrorEntry&, const ErrorEntry&) = default;
};

struct RoundStats {
  int round = 1;
  std::size_t inputs = 0;
  std::size_t concepts_generated = 0;  // parsed, deduplicated and scored
  std::size_t concepts_kept = 0;
  std::size_t instantiations_generated = 0;
  std::size_t instantiations_kept = 0;
  std::size_t duplicates = 0;
  std::size_t failures = 0;
  // "<stage>:<reason>", e.g. "conceptualization:too_long"
  std::map<std::string, std::size_t> rejects_by_reason;
  // tau -> fraction of raw scores >= tau
  std::map<double, double> concept_acceptance_by_tau;
  std::map<double, double> instantiation_acceptance_by_tau;

  friend bool operator==(const RoundStats&, const RoundStats&) = default;
};

nlohmann::ordered_json to_json(const RoundStats& s);
RoundStats round_stats_from_json(const nlohmann::json& j);

struct RoundOutput {
  int round = 1;
  std::vector<ConceptRecord> concepts;  // kept
  std::vector<InstantiationRecord> instantiations;  // kept
  std::vector<ConceptRecord> dropped_concepts;
  std::vector<InstantiationRecord> dropped_instantiations;
  RoundStats stats;
  std::vector<ErrorEntry> errors;

  friend bool operator==(const RoundOutput&, const RoundOutput&) = default;
};

struct KnowledgeStore {
  std::vector<RoundOutput> rounds;

  // Kept records, round by round, concepts before instantiations.
  std::vector<AnyRecord> records() const;
  std::size_t record_count() const;

  friend bool operator==(const KnowledgeStore&, const KnowledgeStore&) = default;
};

// Checkpoint directory:
//   manifest.json                 {"version","round","cursor","config_hash"}
//   round-<k>/records.jsonl       kept records
//   round-<k>/dropped.jsonl       scored records below tau
//   round-<k>/errors.jsonl
//   round-<k>/stats.json
// Round directories are written before the manifest, each file atomically.
struct Checkpoint {
  int completed_rounds = 0;
  std::size_t cursor = 0;  // kept records written so far
  std::string config_hash;
  KnowledgeStore store;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const Checkpoint& state, const std::string& dir);

// Throws cskd::Error if the manifest is missing or malformed, or if
// `expected_hash` is non-empty and differs from the stored hash.
Checkpoint load_checkpoint(const std::string& dir,
                           const std::string& expected_hash = "");

bool has_checkpoint(const std::string& dir);

// Writes the round directory for `round` and then the manifest.
void append_round(const std::string& dir, const RoundOutput& round,
                  std::size_t cursor, const std::string& config_hash);

}  // namespace cskd

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cskd/core/records.hpp"
#include "cskd/core/triple.hpp"
#include "cskd/distill/store.hpp"

namespace cskd {

// Counts per relation, with every relation present (zero when absent).
std::map<Relation, std::size_t> relation_histogram(const std::vector<AnyRecord>& records);
std::map<Relation, std::size_t> relation_histogram(const std::vector<Triple>& triples);

struct Summary {
  std::size_t total_concepts = 0;
  std::size_t total_instantiations = 0;
  std::size_t unique_events = 0;     // distinct source heads h_o
  std::size_t unique_instances = 0;  // distinct i
  std::size_t unique_concepts = 0;   // distinct c
  std::size_t unique_instantiations = 0;  // distinct i'
  double avg_concepts_per_event = 0;
  double avg_unique_concepts_per_event = 0;
  double avg_concepts_per_instance = 0;
  double avg_unique_concepts_per_instance = 0;
  double concept_uniqueness = 1;   // soft uniqueness, grouped by (h_o, i)
  double instantiation_novelty = 1;  // share of h_{i'} unlike their h_o
  std::map<Relation, std::size_t> concept_relations;
  std::map<Relation, std::size_t> instantiation_relations;
  std::vector<RoundStats> rounds;

  friend bool operator==(const Summary&, const Summary&) = default;
};

// Texts are compared after case folding and whitespace collapsing.
Summary summarize(const std::vector<AnyRecord>& records,
                  const std::vector<RoundStats>& rounds = {});
Summary summarize(const KnowledgeStore& store);

nlohmann::ordered_json to_json(const Summary& s);
std::string to_text(const Summary& s);

}  // namespace cskd

#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cskd/core/marked_head.hpp"
#include "cskd/core/relation.hpp"

namespace cskd {

// One generated conceptualization (h_o, i) -> c with h_a = abstract_head.
struct ConceptRecord {
  std::string id;
  std::string source_triple_id;
  Relation relation = Relation::kXEffect;
  std::string tail;
  std::string instance;       // i, as it appeared in the source head
  std::string concept_text;   // c
  MarkedHead abstract_head;   // h_a, concept span marked
  std::optional<double> score;
  int round = 1;
  std::string generator_id;

  // h_o, recovered by putting the instance back into h_a.
  std::string source_head() const;

  friend bool operator==(const ConceptRecord&, const ConceptRecord&) = default;
};

// One generated instantiation (h_a, c) -> i' with h_{i'} = new_head.
struct InstantiationRecord {
  std::string id;
  std::string source_concept_record_id;
  Relation relation = Relation::kXEffect;
  std::string tail;
  std::string instance;   // i'
  MarkedHead new_head;    // h_{i'}, instance span marked
  std::optional<double> score;
  int round = 1;
  std::string generator_id;

  friend bool operator==(const InstantiationRecord&,
                         const InstantiationRecord&) = default;
};

using AnyRecord = std::variant<ConceptRecord, InstantiationRecord>;

// Checks score range, round >= 1, and that the marked span holds the
// record's text. Throws cskd::Error.
void validate(const ConceptRecord& r);
void validate(const InstantiationRecord& r);

// One JSON object per line:
// {"id","kind","source_id","head","span","relation","tail","text",
//  "instance" (concept records only),"score","round","generator"}
std::string to_jsonl_line(const ConceptRecord& r);
std::string to_jsonl_line(const InstantiationRecord& r);
AnyRecord parse_record_line(const std::string& line);

std::size_t write_records(std::span<const AnyRecord> records, std::ostream& out);
std::size_t write_records(std::span<const ConceptRecord> records,
                          std::ostream& out);
std::size_t write_records(std::span<const InstantiationRecord> records,
                          std::ostream& out);

// Throws cskd::Error naming the 1-based line of the first bad record.
std::vector<AnyRecord> read_records(std::istream& in);
std::vector<AnyRecord> read_records_file(const std::string& path);

// Splits a mixed list by kind, preserving order.
void split_records(const std::vector<AnyRecord>& all,
                   std::vector<ConceptRecord>& concepts,
                   std::vector<InstantiationRecord>& instantiations);

}  // namespace cskd

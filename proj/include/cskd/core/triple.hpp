#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cskd/core/marked_head.hpp"
#include "cskd/core/relation.hpp"

namespace cskd {

struct Triple {
  std::string id;
  std::string head;
  Relation relation = Relation::kXEffect;
  std::string tail;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// Checks the Triple invariants: non-empty trimmed head and tail, no "___"
// wildcard in the head. Throws cskd::Error.
void validate(const Triple& t);

// A parsed input line: the triple plus its marked focus instance when the
// source carried one.
struct TripleEntry {
  Triple triple;
  std::optional<MarkedHead> focus;
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct TripleFile {
  std::vector<TripleEntry> entries;
  std::vector<LineError> errors;

  std::vector<Triple> triples() const;
};

enum class TripleFormat { kTsv, kJsonl };

// TSV: head<TAB>relation<TAB>tail[<TAB>bracketed head]
// JSONL: {"id"?, "head", "relation", "tail", "head_bracketed"?}
// Lines without an id get "t<line>". Malformed lines land in `errors`;
// undecodable UTF-8 anywhere in the stream throws cskd::Error.
TripleFile parse_triple_file(std::istream& in, TripleFormat format);

// Picks the format from the extension (.jsonl/.json -> JSONL, else TSV).
TripleFormat format_for_path(const std::string& path);

TripleFile read_triple_file(const std::string& path);

// JSONL in the same shape parse_triple_file(kJsonl) accepts.
std::size_t write_triples(const std::vector<TripleEntry>& entries,
                          std::ostream& out);

}  // namespace cskd

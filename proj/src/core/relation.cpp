#include "cskd/core/relation.hpp"

#include "cskd/core/error.hpp"

namespace cskd {
namespace {

constexpr std::array<std::string_view, 9> kNames = {
    "xEffect", "oEffect", "xWant", "oWant",   "xReact",
    "oReact",  "xNeed",   "xAttr", "xIntent",
};

}  // namespace

std::string_view to_string(Relation r) { return kNames[index_of(r)]; }

std::optional<Relation> try_parse_relation(std::string_view s) {
  for (Relation r : kAllRelations) {
    if (kNames[index_of(r)] == s) return r;
  }
  return std::nullopt;
}

Relation parse_relation(std::string_view s) {
  if (auto r = try_parse_relation(s)) return *r;
  throw Error("unknown relation '" + std::string(s) + "'");
}

}  // namespace cskd

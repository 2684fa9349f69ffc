#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace cskd {

// The nine ATOMIC social if-then relations.
enum class Relation {
  kXEffect,
  kOEffect,
  kXWant,
  kOWant,
  kXReact,
  kOReact,
  kXNeed,
  kXAttr,
  kXIntent,
};

inline constexpr std::array<Relation, 9> kAllRelations = {
    Relation::kXEffect, Relation::kOEffect, Relation::kXWant,
    Relation::kOWant,   Relation::kXReact,  Relation::kOReact,
    Relation::kXNeed,   Relation::kXAttr,   Relation::kXIntent,
};

std::string_view to_string(Relation r);

// Exact, case-sensitive match against the ATOMIC spelling ("xWant").
std::optional<Relation> try_parse_relation(std::string_view s);

// Throws cskd::Error for anything outside the closed set.
Relation parse_relation(std::string_view s);

inline constexpr std::size_t index_of(Relation r) {
  return static_cast<std::size_t>(r);
}

}  // namespace cskd

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cskd/prompt/exemplars.hpp"

namespace cskd {

enum class RejectReason {
  kEmpty,             // nothing left after normalization
  kTooLong,           // conceptualization over kMaxConceptTokens content tokens
  kNoBracketContext,  // still carries [ ] markup, i.e. echoed the event
};

std::string_view to_string(RejectReason r);

inline constexpr std::size_t kMaxConceptTokens = 10;

struct ParseOutcome {
  std::string value;
  std::optional<RejectReason> rejection;

  bool ok() const { return !rejection.has_value(); }
};

// Normalizes one raw completion: the first line, or for numbered/bulleted
// lists the first list item that survives normalization. Rejections are
// returned as values; never throws.
ParseOutcome parse_generation(std::string_view raw, PromptMode mode);

// Every fragment of a multi-candidate completion, normalized independently.
std::vector<ParseOutcome> parse_candidates(std::string_view raw, PromptMode mode);

// The fixpoint normalization applied to a single fragment.
std::string normalize_candidate(std::string_view fragment);

}  // namespace cskd

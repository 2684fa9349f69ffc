#include "cskd/prompt/parse.hpp"

#include <array>
#include <utility>

#include "cskd/core/text.hpp"
#include "cskd/core/tokens.hpp"

namespace cskd {

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kEmpty:
      return "empty";
    case RejectReason::kTooLong:
      return "too_long";
    case RejectReason::kNoBracketContext:
      return "no_bracket_context";
  }
  return "unknown";
}

namespace {

constexpr std::array<std::string_view, 10> kQuotes = {
    "\"", "'", "`", "*", "\xE2\x80\x9C", "\xE2\x80\x9D",
    "\xE2\x80\x98", "\xE2\x80\x99", "\xC2\xAB", "\xC2\xBB"};

constexpr std::array<std::pair<char, char>, 3> kBrackets = {
    {{'[', ']'}, {'(', ')'}, {'{', '}'}}};

constexpr std::array<std::string_view, 7> kLabels = {
    "answer:", "concept:", "conceptualization:", "instance:",
    "instantiation:", "output:", "result:"};

constexpr std::array<std::string_view, 2> kEchoes = {
    "can be conceptualized as", "can be instantiated as"};

bool strip_list_marker(std::string& s) {
  if (s.size() >= 2 && (s[0] == '-' || s[0] == '*') && text::is_space(s[1])) {
    s.erase(0, 2);
    return true;
  }
  if (s.rfind("\xE2\x80\xA2", 0) == 0) {  // bullet
    s.erase(0, 3);
    return true;
  }
  std::size_t i = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  if (i > 0 && i + 1 < s.size() && (s[i] == '.' || s[i] == ')') &&
      text::is_space(s[i + 1])) {
    s.erase(0, i + 2);
    return true;
  }
  return false;
}

bool strip_echo(std::string& s) {
  const std::string lowered = text::to_lower(s);
  for (std::string_view echo : kEchoes) {
    const auto pos = lowered.rfind(echo);
    if (pos != std::string::npos) {
      s.erase(0, pos + echo.size());
      return true;
    }
  }
  return false;
}

bool strip_label(std::string& s) {
  for (std::string_view label : kLabels) {
    if (text::starts_with_icase(s, label)) {
      s.erase(0, label.size());
      return true;
    }
  }
  return false;
}

bool strip_quotes(std::string& s) {
  bool changed = false;
  for (std::string_view q : kQuotes) {
    if (s.size() >= q.size() && s.compare(0, q.size(), q) == 0) {
      s.erase(0, q.size());
      changed = true;
    }
    if (s.size() >= q.size() &&
        s.compare(s.size() - q.size(), q.size(), q) == 0) {
      s.erase(s.size() - q.size());
      changed = true;
    }
  }
  return changed;
}

bool strip_bracket_pair(std::string& s) {
  if (s.size() < 2) return false;
  for (auto [open, close] : kBrackets) {
    if (s.front() == open && s.back() == close) {
      s = s.substr(1, s.size() - 2);
      return true;
    }
  }
  return false;
}

bool strip_terminal_punctuation(std::string& s) {
  bool changed = false;
  while (!s.empty() && std::string_view(".,;:!?").find(s.back()) !=
                           std::string_view::npos) {
    s.pop_back();
    changed = true;
  }
  return changed;
}

ParseOutcome classify(std::string value, PromptMode mode) {
  if (value.empty()) return {"", RejectReason::kEmpty};
  if (value.find('[') != std::string::npos ||
      value.find(']') != std::string::npos) {
    return {std::move(value), RejectReason::kNoBracketContext};
  }
  if (mode == PromptMode::kConceptualization &&
      content_tokens(value).size() > kMaxConceptTokens) {
    return {std::move(value), RejectReason::kTooLong};
  }
  return {std::move(value), std::nullopt};
}

}  // namespace

std::string normalize_candidate(std::string_view fragment) {
  std::string s = text::collapse_whitespace(fragment);
  bool changed = true;
  while (changed) {
    changed = false;
    changed |= strip_echo(s);
    s = text::collapse_whitespace(s);
    changed |= strip_list_marker(s);
    changed |= strip_label(s);
    s = text::collapse_whitespace(s);
    changed |= strip_quotes(s);
    changed |= strip_bracket_pair(s);
    changed |= strip_terminal_punctuation(s);
    const std::string collapsed = text::collapse_whitespace(s);
    changed |= collapsed != s;
    s = collapsed;
  }
  return s;
}

namespace {

struct Fragment {
  ParseOutcome outcome;
  bool list_item = false;
};

std::vector<Fragment> split_fragments(std::string_view raw, PromptMode mode) {
  std::vector<Fragment> out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    auto nl = raw.find('\n', start);
    if (nl == std::string_view::npos) nl = raw.size();
    const std::string_view line = raw.substr(start, nl - start);
    if (!text::trim(line).empty()) {
      std::string probe = text::collapse_whitespace(line);
      const bool marked = strip_list_marker(probe);
      out.push_back({classify(normalize_candidate(line), mode), marked});
    }
    start = nl + 1;
  }
  return out;
}

}  // namespace

std::vector<ParseOutcome> parse_candidates(std::string_view raw,
                                           PromptMode mode) {
  std::vector<ParseOutcome> out;
  for (auto& f : split_fragments(raw, mode)) out.push_back(std::move(f.outcome));
  return out;
}

ParseOutcome parse_generation(std::string_view raw, PromptMode mode) {
  const auto fragments = split_fragments(raw, mode);
  if (fragments.empty()) return {"", RejectReason::kEmpty};
  if (fragments.front().outcome.ok()) return fragments.front().outcome;
  // Numbered or bulleted lists: fall through to the first usable item.
  for (const auto& f : fragments) {
    if (f.list_item && f.outcome.ok()) return f.outcome;
  }
  return fragments.front().outcome;
}

}  // namespace cskd

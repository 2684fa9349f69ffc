#include "cskd/metrics/bleu.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "cskd/core/error.hpp"
#include "cskd/core/tokens.hpp"

namespace cskd {

double bleu1(const Tokens& candidate, const std::vector<Tokens>& references) {
  if (references.empty()) throw Error("bleu1: empty reference set");
  if (candidate.empty()) return 0.0;

  std::unordered_map<std::string, std::size_t> max_ref;
  for (const auto& ref : references) {
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& t : ref) ++counts[t];
    for (const auto& [t, n] : counts) max_ref[t] = std::max(max_ref[t], n);
  }
  std::unordered_map<std::string, std::size_t> cand;
  for (const auto& t : candidate) ++cand[t];
  std::size_t clipped = 0;
  for (const auto& [t, n] : cand) {
    const auto it = max_ref.find(t);
    if (it != max_ref.end()) clipped += std::min(n, it->second);
  }
  const double c = static_cast<double>(candidate.size());
  const double precision = static_cast<double>(clipped) / c;

  std::size_t best = references.front().size();
  for (const auto& ref : references) {
    const auto d = [&](std::size_t len) {
      return len > candidate.size() ? len - candidate.size() : candidate.size() - len;
    };
    if (d(ref.size()) < d(best) || (d(ref.size()) == d(best) && ref.size() < best)) {
      best = ref.size();
    }
  }
  const double r = static_cast<double>(best);
  const double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);
  return precision * bp;
}

double bleu1(std::string_view candidate, const std::vector<std::string>& references) {
  std::vector<Tokens> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(bleu_tokens(r));
  return bleu1(bleu_tokens(candidate), refs);
}

double soft_uniqueness_ratio(const std::vector<GroupedText>& items, double threshold) {
  if (items.empty()) return 1.0;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < items.size(); ++i) groups[items[i].group].push_back(i);
  std::vector<Tokens> tokens;
  tokens.reserve(items.size());
  for (const auto& it : items) tokens.push_back(bleu_tokens(it.text));

  std::size_t unique = 0;
  for (const auto& [group, members] : groups) {
    for (std::size_t i : members) {
      std::vector<Tokens> refs;
      for (std::size_t j : members) {
        if (j != i) refs.push_back(tokens[j]);
      }
      if (refs.empty() || bleu1(tokens[i], refs) < threshold) ++unique;
    }
  }
  return static_cast<double>(unique) / static_cast<double>(items.size());
}

double novelty_ratio(const std::vector<HeadPair>& pairs, double threshold) {
  if (pairs.empty()) return 1.0;
  std::size_t novel = 0;
  for (const auto& p : pairs) {
    if (bleu1(p.new_head, {p.source_head}) < threshold) ++novel;
  }
  return static_cast<double>(novel) / static_cast<double>(pairs.size());
}

}  // namespace cskd

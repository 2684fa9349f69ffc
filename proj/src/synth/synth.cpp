#include "cskd/synth/synth.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "cskd/core/error.hpp"
#include "cskd/core/text.hpp"
#include "cskd/core/tokens.hpp"

namespace cskd {

using text::normalize_key;

std::string_view to_string(Label l) {
  return l == Label::kPositive ? "positive" : "negative";
}

std::string_view to_string(DiscTask t) {
  return t == DiscTask::kEventDisc ? "event_disc" : "triple_disc";
}

std::string LabeledPair::statement() const {
  if (task == DiscTask::kEventDisc) {
    return std::string(strip_terminal_period(text_a)) + ". " + text_b;
  }
  return std::string(strip_terminal_period(text_a)) + ", " +
         std::string(strip_terminal_period(text_b)) + ".";
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) throw Error("uniform_index: empty range");
  const std::uint64_t range = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

namespace {

using TokenSet = std::vector<std::string>;  // sorted, unique

TokenSet token_set(std::string_view s) {
  auto t = content_tokens(s);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

bool disjoint(const TokenSet& a, const TokenSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return true;
}

}  // namespace

DiscResult synth_event_disc(const std::vector<ConceptRecord>& records, std::uint64_t seed) {
  DiscResult out;
  std::vector<std::string> event(records.size());
  std::vector<std::string> concept_key(records.size());
  std::vector<TokenSet> head_tokens(records.size()), concept_tokens(records.size());
  std::unordered_map<std::string, std::unordered_set<std::string>> concepts_of;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string head = records[i].source_head();
    event[i] = normalize_key(head);
    concept_key[i] = normalize_key(records[i].concept_text);
    head_tokens[i] = token_set(head);
    concept_tokens[i] = token_set(records[i].concept_text);
    concepts_of[event[i]].insert(concept_key[i]);
  }
  const bool single_event = concepts_of.size() < 2;

  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (single_event) {
      out.skipped.push_back({r.id, "fewer than two head events"});
      continue;
    }
    std::optional<std::size_t> pick;
    for (int attempt = 0; attempt < kMaxResampleAttempts && !pick; ++attempt) {
      const std::size_t j = uniform_index(rng, records.size());
      if (event[j] == event[i]) continue;
      if (concepts_of[event[i]].count(concept_key[j])) continue;
      if (!disjoint(concept_tokens[j], head_tokens[i])) continue;
      pick = j;
    }
    if (!pick) {
      out.skipped.push_back({r.id, "no eligible negative concept"});
      continue;
    }
    const std::string head = r.source_head();
    out.pairs.push_back({head, concept_assertion(r.instance, r.concept_text), Label::kPositive,
                         DiscTask::kEventDisc});
    out.pairs.push_back({head, concept_assertion(r.instance, records[*pick].concept_text),
                         Label::kNegative, DiscTask::kEventDisc});
  }
  return out;
}

DiscResult synth_triple_disc(const std::vector<Triple>& triples, std::uint64_t seed,
                             const TemplateTable& templates) {
  DiscResult out;
  std::map<Relation, std::vector<std::size_t>> by_relation;
  std::vector<std::string> head_key(triples.size());
  std::vector<TokenSet> head_tokens(triples.size()), tail_tokens(triples.size());
  std::unordered_map<std::string, std::unordered_set<std::string>> tails_of;  // head|rel -> tails
  auto hr = [&](std::size_t i) {
    return head_key[i] + '\x1f' + std::string(to_string(triples[i].relation));
  };
  for (std::size_t i = 0; i < triples.size(); ++i) {
    head_key[i] = normalize_key(triples[i].head);
    head_tokens[i] = token_set(triples[i].head);
    tail_tokens[i] = token_set(triples[i].tail);
    by_relation[triples[i].relation].push_back(i);
    tails_of[hr(i)].insert(normalize_key(triples[i].tail));
  }

  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    const auto& pool = by_relation[t.relation];
    std::optional<std::size_t> pick;
    for (int attempt = 0; attempt < kMaxResampleAttempts && !pick; ++attempt) {
      const std::size_t j = pool[uniform_index(rng, pool.size())];
      if (head_key[j] == head_key[i]) continue;
      if (tails_of[hr(i)].count(normalize_key(triples[j].tail))) continue;
      if (!disjoint(tail_tokens[j], head_tokens[i])) continue;
      pick = j;
    }
    if (!pick) {
      out.skipped.push_back({t.id, "no eligible negative tail"});
      continue;
    }
    const std::string prefix = render_prompt_prefix(t.head, t.relation, templates);
    out.pairs.push_back({prefix, t.tail, Label::kPositive, DiscTask::kTripleDisc});
    out.pairs.push_back({prefix, triples[*pick].tail, Label::kNegative, DiscTask::kTripleDisc});
  }
  return out;
}

std::vector<CometPair> synth_comet_lines(const std::vector<Triple>& triples,
                                         const TemplateTable& templates) {
  std::vector<CometPair> out;
  out.reserve(triples.size());
  for (const auto& t : triples) {
    out.push_back({render_prompt_prefix(t.head, t.relation, templates), t.tail});
  }
  return out;
}

QAResult synth_qa_pairs(const std::vector<Triple>& triples, const QAOptions& options,
                        const TemplateTable& templates) {
  if (options.option_count < 2) throw Error("option_count must be >= 2");
  QAResult out;
  const std::size_t distractors = options.option_count - 1;
  std::vector<TokenSet> head_tokens(triples.size()), tail_tokens(triples.size());
  std::map<Relation, std::vector<std::size_t>> by_relation;
  std::vector<std::size_t> all(triples.size());
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    head_tokens[i] = token_set(triples[i].head);
    tail_tokens[i] = token_set(triples[i].tail);
    by_relation[triples[i].relation].push_back(i);
  }

  std::mt19937_64 rng(options.seed);
  const int budget = kMaxResampleAttempts * static_cast<int>(distractors);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    const auto& pool = options.stratify_by_relation ? by_relation[t.relation] : all;
    std::vector<std::string> chosen;
    std::unordered_set<std::string> used = {normalize_key(t.tail)};
    for (int attempt = 0; attempt < budget && chosen.size() < distractors; ++attempt) {
      const std::size_t j = pool[uniform_index(rng, pool.size())];
      if (!disjoint(tail_tokens[j], head_tokens[i])) continue;
      if (!used.insert(normalize_key(triples[j].tail)).second) continue;
      chosen.push_back(triples[j].tail);
    }
    if (chosen.size() < distractors) {
      out.skipped.push_back({t.id, "not enough eligible distractors"});
      continue;
    }
    QAItem item;
    item.question = render_prompt_prefix(t.head, t.relation, templates);
    item.gold_index = uniform_index(rng, options.option_count);
    item.options = std::move(chosen);
    item.options.insert(item.options.begin() + static_cast<std::ptrdiff_t>(item.gold_index),
                        t.tail);
    out.items.push_back(std::move(item));
  }
  return out;
}

std::vector<Triple> sample_triples(const std::vector<Triple>& triples, std::size_t n,
                                   std::uint64_t seed, bool stratify) {
  if (n >= triples.size()) return triples;
  std::mt19937_64 rng(seed);
  auto pick = [&](std::vector<std::size_t> idx, std::size_t k) {
    // partial Fisher-Yates
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(idx[i], idx[i + uniform_index(rng, idx.size() - i)]);
    }
    idx.resize(k);
    return idx;
  };
  std::vector<std::size_t> chosen;
  if (!stratify) {
    std::vector<std::size_t> idx(triples.size());
    std::iota(idx.begin(), idx.end(), 0);
    chosen = pick(std::move(idx), n);
  } else {
    std::map<Relation, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < triples.size(); ++i) groups[triples[i].relation].push_back(i);
    // largest remainder apportionment
    std::vector<std::pair<Relation, std::size_t>> quota;
    std::vector<std::pair<double, Relation>> rema;
    std::size_t assigned = 0;
    for (const auto& [r, idx] : groups) {
      const double exact = static_cast<double>(n) * static_cast<double>(idx.size()) /
                           static_cast<double>(triples.size());
      const auto base = static_cast<std::size_t>(exact);
      quota.push_back({r, base});
      rema.push_back({exact - static_cast<double>(base), r});
      assigned += base;
    }
    std::stable_sort(rema.begin(), rema.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) {
      for (auto& q : quota) {
        if (q.first == rema[k].second) ++q.second;
      }
    }
    for (const auto& [r, k] : quota) {
      const auto part = pick(groups[r], k);
      chosen.insert(chosen.end(), part.begin(), part.end());
    }
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<Triple> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(triples[i]);
  return out;
}

std::vector<Triple> record_triples(const std::vector<AnyRecord>& records) {
  std::vector<Triple> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    std::visit(
        [&](const auto& r) {
          if constexpr (std::is_same_v<std::decay_t<decltype(r)>, ConceptRecord>) {
            out.push_back({r.id, r.abstract_head.text(), r.relation, r.tail});
          } else {
            out.push_back({r.id, r.new_head.text(), r.relation, r.tail});
          }
        },
        rec);
  }
  return out;
}

nlohmann::ordered_json to_json(const LabeledPair& p) {
  nlohmann::ordered_json j;
  j["text_a"] = p.text_a;
  j["text_b"] = p.text_b;
  j["label"] = to_string(p.label);
  j["task"] = to_string(p.task);
  return j;
}

nlohmann::ordered_json to_json(const QAItem& q) {
  nlohmann::ordered_json j;
  j["question"] = q.question;
  j["options"] = q.options;
  j["gold_index"] = q.gold_index;
  return j;
}

nlohmann::ordered_json to_json(const CometPair& c) {
  nlohmann::ordered_json j;
  j["source"] = c.source;
  j["target"] = c.target;
  return j;
}

nlohmann::ordered_json to_json(const SkipEntry& s) {
  nlohmann::ordered_json j;
  j["item_id"] = s.item_id;
  j["reason"] = s.reason;
  return j;
}

}  // namespace cskd

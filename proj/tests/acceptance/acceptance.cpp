// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and sizes are pinned below.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cskd/cli/cli.hpp"
#include "cskd/core/error.hpp"
#include "cskd/core/fileio.hpp"
#include "cskd/core/marked_head.hpp"
#include "cskd/core/records.hpp"
#include "cskd/core/templates.hpp"
#include "cskd/core/tokens.hpp"
#include "cskd/core/triple.hpp"
#include "cskd/critic/critic.hpp"
#include "cskd/critic/filter.hpp"
#include "cskd/distill/store.hpp"
#include "cskd/gateway/backend.hpp"
#include "cskd/gateway/gateway.hpp"
#include "cskd/metrics/bleu.hpp"
#include "cskd/metrics/summary.hpp"
#include "cskd/prompt/exemplars.hpp"
#include "cskd/prompt/prompt.hpp"
#include "cskd/synth/synth.hpp"
#include "oracles.hpp"

using namespace cskd;
namespace fs = std::filesystem;
using namespace std::chrono_literals;

namespace {

constexpr double kE2eSecondsLimit = 30.0;
constexpr double kTau = 0.9;
constexpr int kSpanCases = 1000;
constexpr int kBleuCases = 500;
constexpr std::size_t kBleuMaxLen = 8;
constexpr double kBleuTolerance = 1e-9;
constexpr std::size_t kSynthMinItems = 1000;
constexpr std::size_t kQaOptions = 4;
constexpr std::size_t kBatchSize = 200;
constexpr std::size_t kMaxInFlight = 8;

const std::string kData = CSKD_DATA_DIR;
const std::string kGolden = CSKD_GOLDEN_DIR;

// Collects failures for one criterion; the first few are echoed.
struct Check {
  std::vector<std::string> failures;
  std::string note;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

int g_failed = 0;

void report(const std::string& name, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const bool ok = c.failures.empty();
  if (!ok) ++g_failed;
  std::cout << (ok ? "PASS " : "FAIL ") << name;
  if (!c.note.empty()) std::cout << " (" << c.note << ")";
  std::cout << "\n";
  for (std::size_t i = 0; i < c.failures.size() && i < 5; ++i)
    std::cout << "    " << c.failures[i] << "\n";
  if (c.failures.size() > 5) std::cout << "    ... " << c.failures.size() - 5 << " more\n";
}

std::string scratch(const std::string& name) {
  const auto p =
      fs::temp_directory_path() / ("cskd-accept-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p.string();
}

std::map<std::string, std::string> tree_contents(const std::string& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path().string());
  }
  return out;
}

std::string id_of(const AnyRecord& r) {
  return std::visit([](const auto& x) { return x.id; }, r);
}

// ---------------------------------------------------------------------------
// End-to-end loop. Shared with the filtering criterion.

struct E2eRun {
  std::string dir_a, dir_b;
  bool ran = false;
};

E2eRun g_e2e;

void end_to_end(Check& c) {
  const std::string mini = kData + "/mini_cskb.tsv";

  // Seed data shape.
  const auto file = read_triple_file(mini);
  c.expect(file.errors.empty(), "mini-CSKB has malformed lines");
  std::set<Relation> rels;
  std::size_t bracketed = 0;
  std::set<std::string> seed_ids;
  for (const auto& e : file.entries) {
    seed_ids.insert(e.triple.id);
    if (e.focus) {
      ++bracketed;
      rels.insert(e.triple.relation);
    }
  }
  c.expect(bracketed >= 50, "fewer than 50 bracketed triples: " + std::to_string(bracketed));
  c.expect(rels.size() == kAllRelations.size(), "bracketed triples miss a relation");

  g_e2e.dir_a = scratch("e2e-a");
  g_e2e.dir_b = scratch("e2e-b");
  auto args_for = [&](const std::string& out) {
    return std::vector<std::string>{"distill", "--input", mini, "--out", out, "--backend", "mock",
                                    "--seed", "7", "--tau", "0.9", "--nc", "20", "--rounds", "2"};
  };
  std::ostringstream out, err;
  const auto t0 = std::chrono::steady_clock::now();
  const int code_a = cli::run(args_for(g_e2e.dir_a), out, err);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int code_b = cli::run(args_for(g_e2e.dir_b), out, err);
  c.expect(code_a == 0 && code_b == 0, "distill exited nonzero: " + err.str());
  if (code_a != 0 || code_b != 0) return;
  g_e2e.ran = true;
  c.expect(secs < kE2eSecondsLimit, "run took " + std::to_string(secs) + " s");

  const auto records = read_records_file(g_e2e.dir_a + "/records.jsonl");
  c.expect(!records.empty(), "no records emitted");
  std::map<std::string, AnyRecord> by_id;
  std::set<int> rounds_seen;
  for (const auto& r : records) {
    by_id.emplace(id_of(r), r);
    const auto& s = record_score(r);
    c.expect(s.has_value() && *s >= kTau, "record below tau: " + id_of(r));
    const int round = std::visit([](const auto& x) { return x.round; }, r);
    rounds_seen.insert(round);
    c.expect(round == 1 || round == 2, "round out of range: " + id_of(r));
  }
  c.expect(rounds_seen == std::set<int>{1, 2}, "expected records from both rounds");

  // Walk each record's source chain back to a seed triple id.
  for (const auto& r : records) {
    std::string cur = id_of(r);
    bool resolved = false;
    for (int hops = 0; hops < 16; ++hops) {
      const auto it = by_id.find(cur);
      if (it == by_id.end()) {
        resolved = seed_ids.count(cur) != 0;
        break;
      }
      cur = std::visit(
          [](const auto& x) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ConceptRecord>)
              return x.source_triple_id;
            else
              return x.source_concept_record_id;
          },
          it->second);
    }
    c.expect(resolved, "provenance does not resolve: " + id_of(r));
  }

  // Byte-identical stores.
  for (const char* f : {"records.jsonl", "stats.json"}) {
    c.expect(read_file(g_e2e.dir_a + "/" + f) == read_file(g_e2e.dir_b + "/" + f),
             std::string(f) + " differs between runs");
  }
  const auto ta = tree_contents(g_e2e.dir_a + "/checkpoint");
  const auto tb = tree_contents(g_e2e.dir_b + "/checkpoint");
  c.expect(!ta.empty() && ta == tb, "checkpoint directories differ between runs");

  c.note = std::to_string(records.size()) + " records, " + std::to_string(secs).substr(0, 4) + " s";
}

// ---------------------------------------------------------------------------

std::string random_phrase(std::mt19937_64& rng, const std::vector<std::string>& words,
                          std::size_t max_words) {
  const std::size_t n = 1 + rng() % max_words;
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += words[rng() % words.size()];
  }
  return out;
}

void span_algebra(Check& c) {
  const std::vector<std::string> words = {"PersonX", "eats", "the", "café", "naïve", "日本",
                                          "bar",     "a",    "ß",   "🎉",    "über",  "x",
                                          "long-word", "Ωmega", "beach", "PersonY"};
  std::mt19937_64 rng(20240517);
  for (int k = 0; k < kSpanCases; ++k) {
    // Whole-word span over a random head.
    const std::size_t n = 1 + rng() % 7;
    std::vector<std::string> toks;
    for (std::size_t i = 0; i < n; ++i) toks.push_back(words[rng() % words.size()]);
    const std::size_t a = rng() % n;
    const std::size_t b = a + 1 + rng() % (n - a);
    std::string head;
    std::size_t start = 0, end = 0, pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) {
        head += ' ';
        ++pos;
      }
      if (i == a) start = pos;
      head += toks[i];
      pos += oracle::length(toks[i]);
      if (i + 1 == b) end = pos;
    }
    const std::string instance = oracle::encode(oracle::decode(head).substr(start, end - start));
    const std::string concept_text = random_phrase(rng, words, 3);
    const std::string new_instance = random_phrase(rng, words, 4);
    const std::string tag = "case " + std::to_string(k) + ": " + head;

    const MarkedHead h(head, {start, end}, SpanKind::kInstance);
    c.expect(h.span_text() == instance, tag + " span text");
    const MarkedHead ha = conceptualize_head(h, concept_text);
    const std::size_t clen = oracle::length(concept_text);
    c.expect(ha.text() == oracle::splice(head, start, end, concept_text), tag + " h_a text");
    c.expect(ha.span() == Span{start, start + clen}, tag + " h_a span");
    c.expect(ha.kind() == SpanKind::kConcept, tag + " h_a kind");
    c.expect(ha.span_text() == concept_text, tag + " h_a span text");
    c.expect(instantiate_head(ha, new_instance) ==
                 oracle::splice(ha.text(), start, start + clen, new_instance),
             tag + " h_i'");
    c.expect(instantiate_head(ha, instance) == head, tag + " round trip");
    c.expect(mark_span(render_bracketed(h)) == h, tag + " bracket round trip");
  }

  // Every bracketed head in the mini-CSKB renders back to its source column.
  std::ifstream in(kData + "/mini_cskb.tsv");
  std::string line;
  std::size_t checked = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string col; std::getline(ss, col, '\t');) cols.push_back(col);
    if (cols.size() < 4) continue;
    const MarkedHead m = mark_span(cols[0], cols[3]);
    c.expect(render_bracketed(m) == cols[3], "mini-CSKB render: " + cols[3]);
    c.expect(m.text() == cols[0], "mini-CSKB text: " + cols[0]);
    ++checked;
  }
  c.expect(checked >= 50, "mini-CSKB bracket lines checked: " + std::to_string(checked));
  c.note = std::to_string(kSpanCases) + " random cases, " + std::to_string(checked) + " seed heads";
}

// ---------------------------------------------------------------------------

void bleu_oracle(Check& c) {
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f"};
  std::mt19937_64 rng(99);
  auto draw = [&](std::size_t min_len) {
    Tokens t(min_len + rng() % (kBleuMaxLen - min_len + 1));
    for (auto& w : t) w = vocab[rng() % vocab.size()];
    return t;
  };
  double worst = 0;
  for (int k = 0; k < kBleuCases; ++k) {
    const Tokens cand = draw(0);
    std::vector<Tokens> refs(1 + rng() % 4);
    for (auto& r : refs) r = draw(1);
    const double got = bleu1(cand, refs);
    const double want = oracle::bleu1(cand, refs);
    worst = std::max(worst, std::abs(got - want));
    c.expect(std::abs(got - want) < kBleuTolerance, "case " + std::to_string(k));
    c.expect(got >= 0.0 && got <= 1.0, "out of range, case " + std::to_string(k));
  }
  const double pinned = bleu1(std::string_view("social place"), {"social gathering place"});
  c.expect(std::abs(pinned - std::exp(-0.5)) < kBleuTolerance, "social place != exp(-0.5)");
  c.expect(std::abs(oracle::bleu1({"social", "place"}, {{"social", "gathering", "place"}}) -
                    std::exp(-0.5)) < kBleuTolerance,
           "oracle disagrees on the pinned case");
  c.expect(bleu1(std::string_view("healthy lifestyle"), {"healthy lifestyle"}) == 1.0, "identity");
  c.expect(bleu1(std::string_view("beer festival"), {"social gathering"}) == 0.0, "disjoint");
  std::ostringstream os;
  os << kBleuCases << " cases, max diff " << worst;
  c.note = os.str();
}

// ---------------------------------------------------------------------------

// Returns the scores the example table lists for two swim statements.
class TableCritic final : public Critic {
 public:
  explicit TableCritic(std::map<std::string, double> table) : table_(std::move(table)) {}
  std::string id() const override { return "table"; }

 protected:
  double do_score_statement(const std::string& s) const override { return table_.at(s); }

 private:
  std::map<std::string, double> table_;
};

template <class R>
std::set<std::string> ids_of(const std::vector<R>& v) {
  std::set<std::string> out;
  for (const auto& r : v) out.insert(r.id);
  return out;
}

void filtering(Check& c) {
  // Two statements from the example table, scored through a critic.
  const auto& tt = TemplateTable::defaults();
  const std::string freshwater =
      render_statement("PersonX swims in freshwater", Relation::kXReact, "tired", tt);
  const std::string sea = render_statement("PersonX swims in the sea", Relation::kXReact, "tired", tt);
  const TableCritic critic({{freshwater, 0.97}, {sea, 0.87}});
  const MarkedHead lake = mark_span("PersonX swims in the [lake]");
  auto inst = [&](std::string id, const std::string& text, const std::string& statement) {
    const MarkedHead ha = conceptualize_head(lake, "body of water");
    return InstantiationRecord{.id = std::move(id),
                               .source_concept_record_id = "c",
                               .relation = Relation::kXReact,
                               .tail = "tired",
                               .instance = text,
                               .new_head = replace_span(ha, text, SpanKind::kInstance),
                               .score = critic.score_statement(statement),
                               .round = 1,
                               .generator_id = "table"};
  };
  const std::vector<InstantiationRecord> pair = {inst("fresh", "freshwater", freshwater),
                                                 inst("sea", "the sea", sea)};
  const auto p = filter_records(pair, kTau);
  c.expect(ids_of(p.kept) == std::set<std::string>{"fresh"}, "0.97 should be kept at 0.9");
  c.expect(ids_of(p.dropped) == std::set<std::string>{"sea"}, "0.87 should be dropped at 0.9");

  // Every round of the end-to-end store.
  if (!g_e2e.ran) {
    c.expect(false, "end-to-end store unavailable");
    return;
  }
  const auto cp = load_checkpoint(g_e2e.dir_a + "/checkpoint");
  std::size_t scored = 0;
  for (const auto& round : cp.store.rounds) {
    const std::string tag = "round " + std::to_string(round.round);
    std::vector<ConceptRecord> concepts = round.concepts;
    concepts.insert(concepts.end(), round.dropped_concepts.begin(), round.dropped_concepts.end());
    std::vector<InstantiationRecord> insts = round.instantiations;
    insts.insert(insts.end(), round.dropped_instantiations.begin(),
                 round.dropped_instantiations.end());
    scored += concepts.size() + insts.size();

    // Partition: re-filtering everything scored reproduces kept and dropped.
    const auto pc = filter_records(concepts, kTau);
    c.expect(ids_of(pc.kept) == ids_of(round.concepts), tag + " concept kept set");
    c.expect(ids_of(pc.dropped) == ids_of(round.dropped_concepts), tag + " concept dropped set");
    c.expect(pc.kept.size() + pc.dropped.size() == concepts.size(), tag + " concept sizes");
    c.expect(round.stats.concepts_generated == concepts.size(), tag + " concepts_generated");
    c.expect(round.stats.concepts_kept == round.concepts.size(), tag + " concepts_kept");
    const auto pi = filter_records(insts, kTau);
    c.expect(ids_of(pi.kept) == ids_of(round.instantiations), tag + " inst kept set");
    c.expect(ids_of(pi.dropped) == ids_of(round.dropped_instantiations), tag + " inst dropped set");
    c.expect(round.stats.instantiations_generated == insts.size(), tag + " inst generated");
    c.expect(round.stats.instantiations_kept == round.instantiations.size(), tag + " inst kept");
    std::set<std::string> overlap;
    for (const auto& id : ids_of(round.concepts))
      if (ids_of(round.dropped_concepts).count(id)) overlap.insert(id);
    c.expect(overlap.empty(), tag + " kept and dropped overlap");

    // Nesting across the grid.
    std::vector<std::set<std::string>> kept_c, kept_i;
    for (double tau : kTauGrid) {
      kept_c.push_back(ids_of(filter_records(concepts, tau).kept));
      kept_i.push_back(ids_of(filter_records(insts, tau).kept));
    }
    for (std::size_t g = 1; g < kTauGrid.size(); ++g) {
      c.expect(std::includes(kept_c[g - 1].begin(), kept_c[g - 1].end(), kept_c[g].begin(),
                             kept_c[g].end()),
               tag + " concept sets not nested at tau " + tau_key(kTauGrid[g]));
      c.expect(std::includes(kept_i[g - 1].begin(), kept_i[g - 1].end(), kept_i[g].begin(),
                             kept_i[g].end()),
               tag + " inst sets not nested at tau " + tau_key(kTauGrid[g]));
    }
    c.expect(kept_c.front().size() == concepts.size(), tag + " tau 0 keeps everything");
    for (const auto* grid : {&round.stats.concept_acceptance_by_tau,
                             &round.stats.instantiation_acceptance_by_tau}) {
      double prev = 1.0;
      for (double tau : kTauGrid) {
        const double v = grid->at(tau);
        c.expect(v <= prev, tag + " acceptance increases at tau " + tau_key(tau));
        prev = v;
      }
    }
  }
  c.expect(cp.store.rounds.size() == 2, "expected two rounds in the store");
  c.note = std::to_string(scored) + " scored records over " + std::to_string(cp.store.rounds.size()) +
           " rounds";
}

// ---------------------------------------------------------------------------

PromptQuery conceptualization_query() {
  return {mark_span("PersonX likes [painting on the beach]"), Relation::kXEffect, "go to the beach"};
}

PromptQuery instantiation_query() {
  return {mark_span("PersonX likes [exercise]", SpanKind::kConcept), Relation::kXEffect,
          "go to the stadium"};
}

void prompt_goldens(Check& c) {
  const auto& tt = TemplateTable::defaults();
  const auto& cset = default_exemplars(PromptMode::kConceptualization);
  const auto& iset = default_exemplars(PromptMode::kInstantiation);
  const std::string cp = build_conceptualization_prompt(conceptualization_query(), cset, tt);
  const std::string ip = build_instantiation_prompt(instantiation_query(), iset, tt);

  auto contains = [](const std::string& s, const std::string& frag) {
    return s.find(frag) != std::string::npos;
  };
  auto ends_with = [](const std::string& s, const std::string& tail) {
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
  };
  c.expect(contains(cp, "can be conceptualized as"), "conceptualization fragment missing");
  c.expect(contains(cp, "Social Gathering Place"), "exemplar answer Social Gathering Place missing");
  c.expect(contains(cp, "PersonX enjoys drinking in the [bar]"), "bar exemplar missing");
  c.expect(ends_with(cp, "PersonX likes [painting on the beach], as a result, PersonX will go to the "
                         "beach. [painting on the beach] can be conceptualized as"),
           "conceptualization query line");
  c.expect(contains(ip, "can be instantiated as"), "instantiation fragment missing");
  c.expect(contains(ip, "[Social Gathering Place] can be instantiated as beer festival"),
           "exemplar answer beer festival missing");
  c.expect(contains(ip, "PersonX likes [exercise], as a result, PersonX will go to the stadium."),
           "instantiation query line");
  c.expect(ends_with(ip, "[exercise] can be instantiated as"), "instantiation prompt ending");

  // Byte-stable: rebuilt prompts are identical and match the checked-in files.
  c.expect(cp == build_conceptualization_prompt(conceptualization_query(), cset, tt),
           "conceptualization prompt not stable");
  c.expect(ip == build_instantiation_prompt(instantiation_query(), iset, tt),
           "instantiation prompt not stable");
  c.expect(read_file(kGolden + "/conceptualization_prompt.txt") == cp,
           "conceptualization prompt differs from golden file");
  c.expect(read_file(kGolden + "/instantiation_prompt.txt") == ip,
           "instantiation prompt differs from golden file");
}

// ---------------------------------------------------------------------------

bool oracle_stop(const std::string& w) {
  return is_stopword(w) || w == "personx" || w == "persony" || w == "personz";
}

// "Bar is a social gathering place." -> "social gathering place"
std::string assertion_concept(const std::string& s) {
  for (const char* cue : {" is an ", " is a "}) {
    const auto p = s.find(cue);
    if (p != std::string::npos) {
      std::string rest = s.substr(p + std::string(cue).size());
      if (!rest.empty() && rest.back() == '.') rest.pop_back();
      return rest;
    }
  }
  return s;
}

void synthesis(Check& c) {
  const std::vector<std::string> verbs = {"visits", "cleans", "paints", "repairs", "rents",
                                          "decorates", "photographs", "sells", "builds", "guards"};
  const std::vector<std::string> nouns = {
      "kitchen", "garage", "bicycle", "piano",   "garden", "library", "harbor", "tractor",
      "castle",  "bakery", "canoe",   "violin",  "tunnel", "orchard", "museum", "lantern",
      "ferry",   "barn",   "chimney", "stadium", "cellar", "tent",    "bridge", "kiosk"};
  const std::vector<std::string> concepts = {
      "room",        "workspace",    "vehicle",      "instrument",   "outdoor area",
      "public place", "building",    "watercraft",   "structure",    "shop",
      "venue",       "storage space", "landmark",     "farm site",    "light source",
      "cultural site", "transport",  "shelter",      "crossing",     "stall"};
  const std::vector<std::string> tails = {
      "feel tired", "get paid", "smile widely", "sneeze", "take a nap", "call a friend",
      "earn praise", "lose money", "feel proud", "go home", "drink water", "write a report",
      "sing loudly", "buy snacks", "wash hands", "read news"};
  std::mt19937_64 rng(4242);

  // Concept records: one per (verb, noun) pair and concept draw.
  std::vector<ConceptRecord> records;
  for (std::size_t k = 0; records.size() < 1200; ++k) {
    const std::string verb = verbs[k % verbs.size()];
    const std::string noun = nouns[(k / verbs.size()) % nouns.size()];
    const std::string subj = k % 3 == 0 ? "PersonY" : "PersonX";
    const MarkedHead h = mark_span(subj + " " + verb + " the [" + noun + "]");
    const std::string conc = concepts[rng() % concepts.size()];
    records.push_back(ConceptRecord{.id = "c" + std::to_string(k),
                                    .source_triple_id = "t" + std::to_string(k),
                                    .relation = kAllRelations[k % kAllRelations.size()],
                                    .tail = tails[k % tails.size()],
                                    .instance = noun,
                                    .concept_text = conc,
                                    .abstract_head = conceptualize_head(h, conc),
                                    .score = 0.95,
                                    .round = 1,
                                    .generator_id = "synthetic"});
  }

  const auto disc = synth_event_disc(records, 11);
  std::size_t pos = 0, neg = 0;
  for (const auto& p : disc.pairs) {
    if (p.task != DiscTask::kEventDisc) c.expect(false, "wrong task tag");
    if (p.label == Label::kPositive) {
      ++pos;
      continue;
    }
    ++neg;
    const std::string conc = assertion_concept(p.text_b);
    c.expect(!oracle::share_word(p.text_a, conc, oracle_stop),
             "event negative overlaps: " + p.text_a + " / " + conc);
  }
  c.expect(neg >= kSynthMinItems, "too few event negatives: " + std::to_string(neg));
  c.expect(pos == neg, "event pos:neg " + std::to_string(pos) + ":" + std::to_string(neg));

  // Triples for the triple task and QA.
  std::vector<Triple> triples;
  std::multimap<std::string, std::string> tail_of_question;
  std::map<std::string, std::string> head_of_question;
  const auto& tt = TemplateTable::defaults();
  for (std::size_t k = 0; triples.size() < 1200; ++k) {
    const std::string head = (k % 2 ? "PersonX " : "PersonY ") + verbs[k % verbs.size()] + " the " +
                             nouns[(k / verbs.size()) % nouns.size()];
    const Relation rel = kAllRelations[(k / 3) % kAllRelations.size()];
    const std::string tail = tails[rng() % tails.size()];
    triples.push_back({"q" + std::to_string(k), head, rel, tail});
    const std::string q = render_prompt_prefix(head, rel, tt);
    tail_of_question.emplace(q, tail);
    head_of_question[q] = head;
  }

  const auto tdisc = synth_triple_disc(triples, 12);
  std::size_t tpos = 0, tneg = 0;
  for (const auto& p : tdisc.pairs) {
    if (p.label == Label::kPositive) {
      ++tpos;
      continue;
    }
    ++tneg;
    c.expect(!oracle::share_word(p.text_a, p.text_b, oracle_stop),
             "triple negative overlaps: " + p.text_a + " / " + p.text_b);
  }
  c.expect(tneg >= kSynthMinItems, "too few triple negatives: " + std::to_string(tneg));
  c.expect(tpos == tneg, "triple pos:neg " + std::to_string(tpos) + ":" + std::to_string(tneg));

  const auto qa = synth_qa_pairs(triples, QAOptions{.option_count = kQaOptions, .seed = 13});
  c.expect(qa.items.size() >= kSynthMinItems, "too few QA items: " + std::to_string(qa.items.size()));
  for (const auto& item : qa.items) {
    c.expect(item.options.size() == kQaOptions, "option count: " + item.question);
    if (item.gold_index >= item.options.size()) {
      c.expect(false, "gold index out of range: " + item.question);
      continue;
    }
    const std::string& gold = item.options[item.gold_index];
    const auto range = tail_of_question.equal_range(item.question);
    bool gold_ok = false;
    for (auto it = range.first; it != range.second; ++it) gold_ok = gold_ok || it->second == gold;
    c.expect(gold_ok, "gold is not a source tail: " + item.question);
    c.expect(std::count(item.options.begin(), item.options.end(), gold) == 1,
             "gold appears more than once: " + item.question);
    const std::string& head = head_of_question[item.question];
    for (std::size_t o = 0; o < item.options.size(); ++o) {
      if (o == item.gold_index) continue;
      c.expect(!oracle::share_word(head, item.options[o], oracle_stop),
               "distractor overlaps: " + head + " / " + item.options[o]);
    }
  }
  c.note = std::to_string(neg) + " event negatives, " + std::to_string(tneg) + " triple negatives, " +
           std::to_string(qa.items.size()) + " QA items";
}

// ---------------------------------------------------------------------------

void statistics(Check& c) {
  auto concept_rec = [](std::string id, const std::string& bracketed, Relation rel,
                        const std::string& conc) {
    const MarkedHead h = mark_span(bracketed);
    return ConceptRecord{.id = std::move(id),
                         .source_triple_id = "t",
                         .relation = rel,
                         .tail = "tail",
                         .instance = h.span_text(),
                         .concept_text = conc,
                         .abstract_head = conceptualize_head(h, conc),
                         .score = 0.95,
                         .round = 1,
                         .generator_id = "hand"};
  };
  const std::string bar = "PersonX drinks in the [bar]";
  const std::string ball = "PersonX plays [basketball] at school";
  RoundOutput r;
  r.concepts = {concept_rec("a1", bar, Relation::kXReact, "social place"),
                concept_rec("a2", bar, Relation::kXReact, "venue"),
                concept_rec("a3", bar, Relation::kXReact, "Venue "),
                concept_rec("a4", bar, Relation::kXReact, "drinking spot"),
                concept_rec("b1", ball, Relation::kXEffect, "team sport"),
                concept_rec("b2", ball, Relation::kXEffect, "sport"),
                concept_rec("b3", ball, Relation::kXEffect, "ball game"),
                concept_rec("b4", ball, Relation::kXEffect, "exercise"),
                concept_rec("b5", ball, Relation::kXEffect, "physical activity"),
                concept_rec("b6", ball, Relation::kXEffect, "Sport")};
  auto inst_rec = [&](std::string id, const ConceptRecord& src, const std::string& text) {
    return InstantiationRecord{.id = std::move(id),
                               .source_concept_record_id = src.id,
                               .relation = src.relation,
                               .tail = src.tail,
                               .instance = text,
                               .new_head = replace_span(src.abstract_head, text, SpanKind::kInstance),
                               .score = 0.95,
                               .round = 1,
                               .generator_id = "hand"};
  };
  r.instantiations = {inst_rec("i1", r.concepts[1], "pub"),
                      inst_rec("i2", r.concepts[4], "volleyball"),
                      inst_rec("i3", r.concepts[5], "Volleyball")};
  KnowledgeStore store;
  store.rounds.push_back(r);
  const Summary s = summarize(store);

  // Hand counts: events {bar, basketball}; concepts 4 + 6 with "venue" and
  // "sport" each repeated once; instantiations pub, volleyball x2.
  c.expect(s.total_concepts == 10, "total concepts");
  c.expect(s.unique_concepts == 8, "unique concepts");
  c.expect(s.total_instantiations == 3, "total instantiations");
  c.expect(s.unique_instantiations == 2, "unique instantiations");
  c.expect(s.unique_events == 2, "unique events");
  c.expect(s.unique_instances == 2, "unique instances");
  c.expect(s.avg_concepts_per_event == 5.0, "avg concepts per event");
  c.expect(s.avg_unique_concepts_per_event == 4.0, "avg unique concepts per event");
  c.expect(s.avg_concepts_per_instance == 5.0, "avg concepts per instance");
  c.expect(s.avg_unique_concepts_per_instance == 4.0, "avg unique concepts per instance");
  // Each new head keeps 4 of 5 tokens of its source: BLEU 0.8, not novel.
  c.expect(s.instantiation_novelty == 0.0, "instantiation novelty");
  for (Relation rel : kAllRelations) {
    const std::size_t wc = rel == Relation::kXReact ? 4 : rel == Relation::kXEffect ? 6 : 0;
    const std::size_t wi = rel == Relation::kXReact ? 1 : rel == Relation::kXEffect ? 2 : 0;
    c.expect(s.concept_relations.at(rel) == wc, "concept histogram " + std::string(to_string(rel)));
    c.expect(s.instantiation_relations.at(rel) == wi,
             "instantiation histogram " + std::string(to_string(rel)));
  }
  const Summary empty = summarize(KnowledgeStore{});
  c.expect(empty.total_concepts == 0 && empty.avg_concepts_per_event == 0.0, "empty store");

  // Optional, non-gating: a sample of released records.
  const char* sample = std::getenv("CSKD_RELEASED_SAMPLE");
  if (sample == nullptr || *sample == '\0') {
    c.note = "integration check skipped: CSKD_RELEASED_SAMPLE unset";
    return;
  }
  try {
    const auto recs = read_records_file(sample);
    const auto h = relation_histogram(recs);
    std::size_t sum = 0;
    for (const auto& [rel, n] : h) sum += n;
    const bool ok = h.size() == kAllRelations.size() && sum == recs.size();
    c.note = std::string("integration check ") + (ok ? "ok" : "MISMATCH") + " on " +
             std::to_string(recs.size()) + " records";
  } catch (const std::exception& e) {
    c.note = std::string("integration check not run: ") + e.what();
  }
}

// ---------------------------------------------------------------------------

void gateway_contract(Check& c) {
  std::vector<std::string> vocab;
  for (int i = 0; i < 50; ++i) vocab.push_back("word" + std::to_string(i));

  // Every 10th prompt fails its first two attempts.
  std::mutex mu;
  std::map<std::string, int> attempts;
  auto flaky = [&](const std::string& prompt, std::size_t) -> std::optional<AttemptResult> {
    if (prompt.find("#0") == std::string::npos) return std::nullopt;
    std::lock_guard<std::mutex> lock(mu);
    if (attempts[prompt]++ < 2) return AttemptResult::retryable(503, "busy");
    return std::nullopt;
  };
  auto backend = std::make_shared<MockBackend>(MockBackend::Options{
      .seed = 3, .vocabulary = vocab, .distinct_samples = true, .latency = 2ms, .fault = flaky});
  std::vector<std::chrono::milliseconds> slept;
  std::mutex sleep_mu;
  GatewayOptions opts;
  opts.retry = RetryPolicy{.max_attempts = 4, .initial_delay = 10ms, .max_delay = 1000ms};
  opts.sleep = [&](std::chrono::milliseconds d) {
    std::lock_guard<std::mutex> lock(sleep_mu);
    slept.push_back(d);
  };
  const Gateway gw(backend, opts);

  GenParams params;
  params.num_samples = 3;
  std::vector<GenerationRequest> reqs;
  for (std::size_t k = 0; k < kBatchSize; ++k)
    reqs.push_back({"p" + std::to_string(k), "prompt " + std::to_string(k) + " #" +
                                                 std::to_string(k % 10), params});
  const auto results = gw.generate_batch(reqs, kMaxInFlight, 0.0);

  c.expect(results.size() == kBatchSize, "result count");
  c.expect(backend->peak_in_flight() >= 1, "no calls observed");
  c.expect(backend->peak_in_flight() <= static_cast<int>(kMaxInFlight),
           "peak in flight " + std::to_string(backend->peak_in_flight()));

  // Order: result k answers request k, checked against a fresh sequential run.
  auto reference = std::make_shared<MockBackend>(
      MockBackend::Options{
      .seed = 3, .vocabulary = vocab, .distinct_samples = true, .latency = 0ms, .fault = {}});
  const Gateway ref_gw(reference, GatewayOptions{.retry = opts.retry, .sleep = opts.sleep});
  for (std::size_t k = 0; k < results.size() && k < reqs.size(); ++k) {
    c.expect(results[k].prompt_id == reqs[k].prompt_id, "order at " + std::to_string(k));
    c.expect(results[k].ok(), "request failed: " + reqs[k].prompt_id);
    const auto want = ref_gw.generate(reqs[k].prompt_id, reqs[k].prompt, params);
    c.expect(results[k].completions == want.completions, "completions at " + std::to_string(k));
    const auto& d = results[k].retry_delays;
    for (std::size_t j = 1; j < d.size(); ++j)
      c.expect(d[j] >= d[j - 1], "retry delays decrease for " + reqs[k].prompt_id);
    if (reqs[k].prompt.find("#0") != std::string::npos)
      c.expect(d.size() == 2, "expected two retries for " + reqs[k].prompt_id);
  }

  // Exhausted retries: delays climb to the cap and never fall.
  auto dead = std::make_shared<MockBackend>(MockBackend::Options{
      .seed = 1,
      .vocabulary = vocab,
      .fault = [](const std::string&, std::size_t) -> std::optional<AttemptResult> {
        return AttemptResult::retryable(429, "slow down");
      }});
  std::vector<std::chrono::milliseconds> dead_sleeps;
  const Gateway dead_gw(dead, GatewayOptions{
                                  .retry = RetryPolicy{.max_attempts = 7,
                                                       .initial_delay = 10ms,
                                                       .max_delay = 100ms},
                                  .sleep = [&](std::chrono::milliseconds d) { dead_sleeps.push_back(d); }});
  const auto r = dead_gw.generate("dead", "prompt", GenParams{});
  c.expect(!r.ok() && r.failure->kind == FailureKind::kRetriesExhausted, "expected exhaustion");
  const std::vector<std::chrono::milliseconds> want = {10ms, 20ms, 40ms, 80ms, 100ms, 100ms};
  c.expect(r.retry_delays == want, "exhausted retry schedule");
  c.expect(dead_sleeps == want, "sleeper saw a different schedule");
  c.note = "peak in flight " + std::to_string(backend->peak_in_flight()) + " of " +
           std::to_string(kMaxInFlight);
}

}  // namespace

int main(int argc, char** argv) {
  // --write-goldens DIR regenerates the prompt golden files.
  if (argc == 3 && std::string(argv[1]) == "--write-goldens") {
    const auto& tt = TemplateTable::defaults();
    write_file_atomic(std::string(argv[2]) + "/conceptualization_prompt.txt",
                      build_conceptualization_prompt(
                          conceptualization_query(),
                          default_exemplars(PromptMode::kConceptualization), tt));
    write_file_atomic(std::string(argv[2]) + "/instantiation_prompt.txt",
                      build_instantiation_prompt(instantiation_query(),
                                                 default_exemplars(PromptMode::kInstantiation), tt));
    return 0;
  }

  report("end-to-end offline loop", end_to_end);
  report("span algebra", span_algebra);
  report("bleu1 oracle equivalence", bleu_oracle);
  report("filtering", filtering);
  report("prompt goldens", prompt_goldens);
  report("synthesis properties", synthesis);
  report("statistics structure", statistics);
  report("gateway contract", gateway_contract);

  for (const auto& d : {g_e2e.dir_a, g_e2e.dir_b})
    if (!d.empty()) fs::remove_all(d);
  std::cout << (g_failed == 0 ? "all criteria passed" : std::to_string(g_failed) + " failed")
            << "\n";
  return g_failed == 0 ? 0 : 1;
}

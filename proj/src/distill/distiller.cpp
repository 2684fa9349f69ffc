#include "cskd/distill/distiller.hpp"

#include <cstdio>
#include <optional>
#include <unordered_set>

#include <json.hpp>

#include "cskd/core/error.hpp"
#include "cskd/core/hash.hpp"
#include "cskd/core/text.hpp"
#include "cskd/critic/filter.hpp"
#include "cskd/gateway/parallel.hpp"
#include "cskd/prompt/parse.hpp"
#include "cskd/prompt/prompt.hpp"

namespace cskd {

using text::normalize_key;

std::vector<LoopInput> inputs_from_entries(const std::vector<TripleEntry>& entries) {
  std::vector<LoopInput> out;
  for (const auto& e : entries) {
    if (!e.focus) continue;
    if (e.focus->text() != e.triple.head) {
      throw Error("triple " + e.triple.id + ": marked head does not match head text");
    }
    out.push_back({e.triple, e.focus->with_kind(SpanKind::kInstance)});
  }
  return out;
}

std::vector<LoopInput> next_round_inputs(const std::vector<InstantiationRecord>& kept) {
  std::vector<LoopInput> out;
  out.reserve(kept.size());
  for (const auto& r : kept) {
    out.push_back({Triple{r.id, r.new_head.text(), r.relation, r.tail},
                   r.new_head.with_kind(SpanKind::kInstance)});
  }
  return out;
}

void LoopConfig::validate() const {
  if (rounds < 1) throw Error("rounds must be >= 1");
  if (n_c < 1) throw Error("n_c must be >= 1");
  if (instantiations_per_concept < 1) throw Error("instantiations per concept must be >= 1");
  check_tau(tau);
  if (max_in_flight < 1) throw Error("max_in_flight must be >= 1");
  for (const GenParams* p : {&concept_params, &instance_params}) {
    const auto err = p->validation_error();
    if (!err.empty()) throw Error("generation parameters: " + err);
  }
  if (concept_exemplars.mode != PromptMode::kConceptualization) {
    throw Error("concept exemplars are not a conceptualization set");
  }
  if (instance_exemplars.mode != PromptMode::kInstantiation) {
    throw Error("instance exemplars are not an instantiation set");
  }
}

namespace {

nlohmann::ordered_json params_json(const GenParams& p) {
  nlohmann::ordered_json j;
  j["temperature"] = p.temperature;
  j["max_new_tokens"] = p.max_new_tokens;
  j["top_k"] = p.top_k ? nlohmann::ordered_json(*p.top_k) : nlohmann::ordered_json();
  j["seed"] = p.seed;
  return j;
}

nlohmann::ordered_json exemplars_json(const ExemplarSet& s) {
  nlohmann::ordered_json j;
  j["task_prompt"] = s.task_prompt;
  j["version"] = s.version;
  j["exemplars"] = nlohmann::ordered_json::array();
  for (const auto& e : s.exemplars) {
    j["exemplars"].push_back(
        {e.head_bracketed, std::string(to_string(e.relation)), e.tail, e.answer});
  }
  return j;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string join_key(std::initializer_list<std::string_view> parts) {
  std::string k;
  for (auto p : parts) {
    k += p;
    k += '\x1f';
  }
  return k;
}

}  // namespace

std::string config_hash(const LoopConfig& cfg, const Pipeline& pipeline) {
  nlohmann::ordered_json j;
  j["n_c"] = cfg.n_c;
  j["instantiations_per_concept"] = cfg.instantiations_per_concept;
  j["tau"] = cfg.tau;
  j["concept_params"] = params_json(cfg.concept_params);
  j["instance_params"] = params_json(cfg.instance_params);
  j["concept_exemplars"] = exemplars_json(cfg.concept_exemplars);
  j["instance_exemplars"] = exemplars_json(cfg.instance_exemplars);
  j["templates"] = cfg.templates.to_json();
  j["conceptualizer"] = pipeline.conceptualizer ? pipeline.conceptualizer->backend_id() : "";
  j["instantiator"] = pipeline.instantiator ? pipeline.instantiator->backend_id() : "";
  j["critic"] = pipeline.critic ? pipeline.critic->id() : "";
  return hex64(fnv1a64(j.dump()));
}

std::string record_key(const ConceptRecord& r) {
  return join_key({"c", normalize_key(r.abstract_head.text()), to_string(r.relation),
                   normalize_key(r.tail), normalize_key(r.concept_text)});
}

std::string record_key(const InstantiationRecord& r) {
  return join_key({"i", normalize_key(r.new_head.text()), to_string(r.relation),
                   normalize_key(r.tail), normalize_key(r.instance)});
}

std::string record_key(const AnyRecord& r) {
  return std::visit([](const auto& x) { return record_key(x); }, r);
}

std::vector<AnyRecord> dedup_records(const std::vector<AnyRecord>& records) {
  std::unordered_set<std::string> seen;
  std::vector<AnyRecord> out;
  for (const auto& r : records) {
    if (seen.insert(record_key(r)).second) out.push_back(r);
  }
  return out;
}

std::vector<std::string> dedup_texts(const std::vector<std::string>& texts) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  for (const auto& t : texts) {
    if (seen.insert(normalize_key(t)).second) out.push_back(t);
  }
  return out;
}

namespace {

struct Scored {
  std::optional<double> score;
  std::string error;
};

template <class Fn>
std::vector<Scored> score_all(std::size_t n, std::size_t workers, Fn&& fn) {
  std::vector<Scored> out(n);
  parallel_for(n, workers, [&](std::size_t i) {
    try {
      out[i].score = fn(i);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

void count_reject(RoundStats& stats, const char* stage, RejectReason why) {
  ++stats.rejects_by_reason[std::string(stage) + ":" + std::string(to_string(why))];
}

std::string failure_text(const GenerationResult& r) {
  return std::string(to_string(r.failure->kind)) + " (status " +
         std::to_string(r.failure->last_status) + "): " + r.failure->message;
}

}  // namespace

namespace {

using KeySet = std::unordered_set<std::string>;

void check_pipeline(const Pipeline& p, bool need_conceptualizer, bool need_instantiator) {
  if ((need_conceptualizer && !p.conceptualizer) || (need_instantiator && !p.instantiator) ||
      !p.critic) {
    throw Error("pipeline is missing a generator or the critic");
  }
}

void concept_stage(const std::vector<LoopInput>& inputs, const LoopConfig& cfg,
                   const Pipeline& pipeline, const std::set<std::string>* seen,
                   KeySet& round_keys, RoundOutput& out) {
  RoundStats& stats = out.stats;
  auto is_duplicate = [&](const std::string& key) {
    if (seen && seen->count(key)) return true;
    return !round_keys.insert(key).second;
  };
  for (const auto& in : inputs) {
    if (in.head.kind() != SpanKind::kInstance) {
      throw Error("input " + in.triple.id + " does not carry an instance span");
    }
  }
  stats.inputs = inputs.size();

  GenParams cparams = cfg.concept_params;
  cparams.num_samples = cfg.n_c;
  std::vector<GenerationRequest> creqs;
  creqs.reserve(inputs.size());
  for (const auto& in : inputs) {
    creqs.push_back({in.triple.id,
                     build_conceptualization_prompt({in.head, in.triple.relation, in.triple.tail},
                                                    cfg.concept_exemplars, cfg.templates),
                     cparams});
  }
  const auto cresults =
      pipeline.conceptualizer->generate_batch(creqs, cfg.max_in_flight, cfg.rate);

  std::vector<ConceptRecord> candidates;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    const auto& res = cresults[i];
    if (!res.ok()) {
      out.errors.push_back({"conceptualize", in.triple.id, failure_text(res)});
      continue;
    }
    const std::string instance = in.head.span_text();
    std::vector<std::string> values;
    for (const auto& raw : res.completions) {
      const auto parsed = parse_generation(raw, PromptMode::kConceptualization);
      if (!parsed.ok()) {
        count_reject(stats, "conceptualization", *parsed.rejection);
        continue;
      }
      values.push_back(parsed.value);
    }
    const auto unique = dedup_texts(values);
    stats.duplicates += values.size() - unique.size();
    std::size_t k = 0;
    for (const auto& c : unique) {
      ConceptRecord r{in.triple.id + "/c" + std::to_string(k++),
                      in.triple.id,
                      in.triple.relation,
                      in.triple.tail,
                      instance,
                      c,
                      conceptualize_head(in.head, c),
                      std::nullopt,
                      out.round,
                      res.backend_id};
      if (is_duplicate(record_key(r))) {
        ++stats.duplicates;
        continue;
      }
      candidates.push_back(std::move(r));
    }
  }

  const auto cscores = score_all(candidates.size(), cfg.max_in_flight, [&](std::size_t i) {
    const auto& r = candidates[i];
    return pipeline.critic->score_conceptualization(r.source_head(), r.instance,
                                                    r.concept_text);
  });
  std::vector<ConceptRecord> scored;
  std::vector<double> raw;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!cscores[i].score) {
      out.errors.push_back({"score_concept", candidates[i].id, cscores[i].error});
      continue;
    }
    candidates[i].score = cscores[i].score;
    raw.push_back(*cscores[i].score);
    scored.push_back(std::move(candidates[i]));
  }
  auto part = filter_records(scored, cfg.tau);
  stats.concepts_generated = scored.size();
  stats.concepts_kept = part.kept.size();
  stats.concept_acceptance_by_tau = acceptance_by_tau(raw);
  out.concepts = std::move(part.kept);
  out.dropped_concepts = std::move(part.dropped);
  stats.failures = out.errors.size();
}

void instance_stage(const std::vector<ConceptRecord>& concepts, const LoopConfig& cfg,
                    const Pipeline& pipeline, const std::set<std::string>* seen,
                    KeySet& round_keys, RoundOutput& out) {
  RoundStats& stats = out.stats;
  auto is_duplicate = [&](const std::string& key) {
    if (seen && seen->count(key)) return true;
    return !round_keys.insert(key).second;
  };

  GenParams iparams = cfg.instance_params;
  iparams.num_samples = cfg.instantiations_per_concept;
  std::vector<GenerationRequest> ireqs;
  ireqs.reserve(concepts.size());
  for (const auto& c : concepts) {
    ireqs.push_back({c.id,
                     build_instantiation_prompt({c.abstract_head, c.relation, c.tail},
                                                cfg.instance_exemplars, cfg.templates),
                     iparams});
  }
  const auto iresults =
      pipeline.instantiator->generate_batch(ireqs, cfg.max_in_flight, cfg.rate);

  std::vector<InstantiationRecord> candidates;
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    const auto& c = concepts[i];
    const auto& res = iresults[i];
    if (!res.ok()) {
      out.errors.push_back({"instantiate", c.id, failure_text(res)});
      continue;
    }
    std::vector<std::string> values;
    for (const auto& raw : res.completions) {
      const auto parsed = parse_generation(raw, PromptMode::kInstantiation);
      if (!parsed.ok()) {
        count_reject(stats, "instantiation", *parsed.rejection);
        continue;
      }
      values.push_back(parsed.value);
    }
    const auto unique = dedup_texts(values);
    stats.duplicates += values.size() - unique.size();
    std::size_t k = 0;
    for (const auto& v : unique) {
      auto new_head = replace_span(c.abstract_head, v, SpanKind::kInstance);
      InstantiationRecord r{c.id + "/i" + std::to_string(k++),
                            c.id,
                            c.relation,
                            c.tail,
                            new_head.span_text(),
                            std::move(new_head),
                            std::nullopt,
                            out.round,
                            res.backend_id};
      if (is_duplicate(record_key(r))) {
        ++stats.duplicates;
        continue;
      }
      candidates.push_back(std::move(r));
    }
  }

  const auto iscores = score_all(candidates.size(), cfg.max_in_flight, [&](std::size_t i) {
    const auto& r = candidates[i];
    return pipeline.critic->score_statement(
        render_statement(r.new_head.text(), r.relation, r.tail, cfg.templates));
  });
  std::vector<InstantiationRecord> scored;
  std::vector<double> raw;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!iscores[i].score) {
      out.errors.push_back({"score_instantiation", candidates[i].id, iscores[i].error});
      continue;
    }
    candidates[i].score = iscores[i].score;
    raw.push_back(*iscores[i].score);
    scored.push_back(std::move(candidates[i]));
  }
  auto part = filter_records(scored, cfg.tau);
  stats.instantiations_generated = scored.size();
  stats.instantiations_kept = part.kept.size();
  stats.instantiation_acceptance_by_tau = acceptance_by_tau(raw);
  out.instantiations = std::move(part.kept);
  out.dropped_instantiations = std::move(part.dropped);
  stats.failures = out.errors.size();
}

RoundOutput fresh_round(int round) {
  if (round < 1) throw Error("round must be >= 1");
  RoundOutput out;
  out.round = round;
  out.stats.round = round;
  out.stats.concept_acceptance_by_tau = acceptance_by_tau({});
  out.stats.instantiation_acceptance_by_tau = acceptance_by_tau({});
  return out;
}

}  // namespace

RoundOutput conceptualize_stage(const std::vector<LoopInput>& inputs, const LoopConfig& cfg,
                                const Pipeline& pipeline, int round) {
  cfg.validate();
  check_pipeline(pipeline, true, false);
  RoundOutput out = fresh_round(round);
  KeySet keys;
  concept_stage(inputs, cfg, pipeline, nullptr, keys, out);
  return out;
}

RoundOutput instantiate_stage(const std::vector<ConceptRecord>& concepts,
                              const LoopConfig& cfg, const Pipeline& pipeline, int round) {
  cfg.validate();
  check_pipeline(pipeline, false, true);
  for (const auto& c : concepts) validate(c);
  RoundOutput out = fresh_round(round);
  KeySet keys;
  instance_stage(concepts, cfg, pipeline, nullptr, keys, out);
  return out;
}

RoundOutput run_round(const std::vector<LoopInput>& inputs, const LoopConfig& cfg,
                      const Pipeline& pipeline, int round,
                      const std::set<std::string>* seen) {
  cfg.validate();
  check_pipeline(pipeline, true, true);
  RoundOutput out = fresh_round(round);
  KeySet keys;
  concept_stage(inputs, cfg, pipeline, seen, keys, out);
  instance_stage(out.concepts, cfg, pipeline, seen, keys, out);
  return out;
}

namespace {

void remember(std::set<std::string>& seen, const RoundOutput& r) {
  for (const auto& x : r.concepts) seen.insert(record_key(x));
  for (const auto& x : r.dropped_concepts) seen.insert(record_key(x));
  for (const auto& x : r.instantiations) seen.insert(record_key(x));
  for (const auto& x : r.dropped_instantiations) seen.insert(record_key(x));
}

}  // namespace

KnowledgeStore run_loop(const std::vector<LoopInput>& seeds, const LoopConfig& cfg,
                        const Pipeline& pipeline, const LoopHooks& hooks) {
  cfg.validate();
  const std::string hash = config_hash(cfg, pipeline);
  KnowledgeStore store;
  if (!cfg.checkpoint_dir.empty() && has_checkpoint(cfg.checkpoint_dir)) {
    store = load_checkpoint(cfg.checkpoint_dir, hash).store;
    if (store.rounds.size() > static_cast<std::size_t>(cfg.rounds)) {
      store.rounds.resize(cfg.rounds);
    }
  }

  std::set<std::string> seen;
  std::size_t cursor = 0;
  for (const auto& r : store.rounds) {
    remember(seen, r);
    cursor += r.concepts.size() + r.instantiations.size();
  }

  for (int k = static_cast<int>(store.rounds.size()) + 1; k <= cfg.rounds; ++k) {
    const auto inputs =
        k == 1 ? seeds : next_round_inputs(store.rounds.back().instantiations);
    RoundOutput r = run_round(inputs, cfg, pipeline, k, k == 1 ? nullptr : &seen);
    remember(seen, r);
    cursor += r.concepts.size() + r.instantiations.size();
    if (!cfg.checkpoint_dir.empty()) append_round(cfg.checkpoint_dir, r, cursor, hash);
    store.rounds.push_back(std::move(r));
    if (hooks.after_round) hooks.after_round(store.rounds.back());
  }
  return store;
}

}  // namespace cskd

#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cskd/core/marked_head.hpp"
#include "cskd/core/templates.hpp"
#include "cskd/core/triple.hpp"
#include "cskd/critic/critic.hpp"
#include "cskd/distill/store.hpp"
#include "cskd/gateway/gateway.hpp"
#include "cskd/prompt/exemplars.hpp"

namespace cskd {

// A triple with its focus instance marked in the head.
struct LoopInput {
  Triple triple;
  MarkedHead head;
};

// Seeds from a parsed triple file; entries without a bracketed focus are
// skipped. Throws if a focus does not match its triple head.
std::vector<LoopInput> inputs_from_entries(const std::vector<TripleEntry>& entries);

// Round k+1 inputs: each kept instantiation becomes a triple with id = its
// record id, head = h_{i'}, same relation and tail, and i' as the instance.
std::vector<LoopInput> next_round_inputs(
    const std::vector<InstantiationRecord>& kept);

struct LoopConfig {
  int rounds = 1;
  int n_c = kDefaultConceptSamples;
  int instantiations_per_concept = 1;
  double tau = 0.9;
  GenParams concept_params = GenParams::conceptualization_profile();
  GenParams instance_params = GenParams::instantiation_profile();
  std::size_t max_in_flight = 8;
  double rate = 0.0;  // backend calls per second, <= 0 for unlimited
  std::string checkpoint_dir;  // empty disables checkpointing
  ExemplarSet concept_exemplars = default_exemplars(PromptMode::kConceptualization);
  ExemplarSet instance_exemplars = default_exemplars(PromptMode::kInstantiation);
  TemplateTable templates = TemplateTable::defaults();

  // Throws cskd::Error on out-of-range fields.
  void validate() const;
};

struct Pipeline {
  std::shared_ptr<Gateway> conceptualizer;
  std::shared_ptr<Gateway> instantiator;
  std::shared_ptr<Critic> critic;
};

// Hex digest over everything that shapes the output except `rounds`,
// scheduling knobs and the checkpoint path, so a finished run can be
// extended with more rounds.
std::string config_hash(const LoopConfig& cfg, const Pipeline& pipeline);

// Normalized (head, relation, tail, text) identity used for deduplication.
std::string record_key(const ConceptRecord& r);
std::string record_key(const InstantiationRecord& r);
std::string record_key(const AnyRecord& r);

// First occurrence wins; order is stable.
std::vector<AnyRecord> dedup_records(const std::vector<AnyRecord>& records);
std::vector<std::string> dedup_texts(const std::vector<std::string>& texts);

// One conceptualize -> filter -> instantiate -> filter pass. `seen` holds
// keys of records scored in earlier rounds; matching candidates count as
// duplicates. Per-item failures go to the error ledger.
RoundOutput run_round(const std::vector<LoopInput>& inputs, const LoopConfig& cfg,
                      const Pipeline& pipeline, int round = 1,
                      const std::set<std::string>* seen = nullptr);

// The two halves of run_round, for running the stages separately. The
// conceptualize stage needs no instantiator, the instantiate stage no
// conceptualizer; instantiate_stage expands the given concepts as they are.
RoundOutput conceptualize_stage(const std::vector<LoopInput>& inputs, const LoopConfig& cfg,
                                const Pipeline& pipeline, int round = 1);
RoundOutput instantiate_stage(const std::vector<ConceptRecord>& concepts,
                              const LoopConfig& cfg, const Pipeline& pipeline, int round = 1);

struct LoopHooks {
  // Called after each round is complete (and checkpointed).
  std::function<void(const RoundOutput&)> after_round;
};

// Runs cfg.rounds rounds, resuming from cfg.checkpoint_dir when it holds a
// compatible checkpoint.
KnowledgeStore run_loop(const std::vector<LoopInput>& seeds, const LoopConfig& cfg,
                        const Pipeline& pipeline, const LoopHooks& hooks = {});

}  // namespace cskd

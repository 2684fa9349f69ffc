#pragma once

#include <string>

#include "cskd/core/marked_head.hpp"
#include "cskd/core/relation.hpp"
#include "cskd/core/templates.hpp"
#include "cskd/prompt/exemplars.hpp"

namespace cskd {

struct PromptQuery {
  MarkedHead head;  // instance span for conceptualization, concept span for instantiation
  Relation relation = Relation::kXEffect;
  std::string tail;
};

// Task prompt, numbered worked examples, then the query truncated after
// "can be conceptualized as". Throws cskd::Error if the set is not a
// conceptualization set or the query span is not an instance.
std::string build_conceptualization_prompt(const PromptQuery& query,
                                           const ExemplarSet& set,
                                           const TemplateTable& templates);

// Same shape ending in "can be instantiated as"; query span must be a concept.
std::string build_instantiation_prompt(const PromptQuery& query,
                                       const ExemplarSet& set,
                                       const TemplateTable& templates);

// "<bracketed head>, <connective> <tail>" without the trailing period. When
// the tail already opens with the connective's subject phrase ("PersonX
// will ..."), that phrase is not repeated.
std::string verbalize_event(std::string_view bracketed_head, Relation relation,
                            std::string_view tail,
                            const TemplateTable& templates);

}  // namespace cskd

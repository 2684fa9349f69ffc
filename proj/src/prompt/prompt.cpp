#include "cskd/prompt/prompt.hpp"

#include "cskd/core/error.hpp"
#include "cskd/core/text.hpp"

namespace cskd {

std::string verbalize_event(std::string_view bracketed_head, Relation relation,
                            std::string_view tail,
                            const TemplateTable& templates) {
  const std::string& connective = templates.connective(relation);
  const std::string_view clean_tail = strip_terminal_period(tail);
  std::string out(strip_terminal_period(bracketed_head));
  out += ", ";
  // "as a result, PersonX will" + "PersonX will go ..." -> one "PersonX will".
  const auto comma = connective.rfind(", ");
  const std::string_view subject =
      comma == std::string::npos
          ? std::string_view(connective)
          : std::string_view(connective).substr(comma + 2);
  if (text::starts_with_icase(clean_tail, subject) &&
      (clean_tail.size() == subject.size() ||
       text::is_space(clean_tail[subject.size()]))) {
    if (comma != std::string::npos) out += connective.substr(0, comma + 2);
    out += clean_tail;
  } else {
    out += connective;
    out += ' ';
    out += clean_tail;
  }
  return out;
}

namespace {

std::string render_prompt(const PromptQuery& query, const ExemplarSet& set,
                          const TemplateTable& templates,
                          std::string_view verb_phrase) {
  std::string out = set.task_prompt;
  out += '\n';
  std::size_t k = 0;
  for (const Exemplar& ex : set.exemplars) {
    const MarkedHead marked = mark_span(ex.head_bracketed);
    out += "Event " + std::to_string(++k) + ": ";
    out += verbalize_event(ex.head_bracketed, ex.relation, ex.tail, templates);
    out += ". [" + marked.span_text() + "] ";
    out += verb_phrase;
    out += ' ';
    out += ex.answer;
    out += '\n';
  }
  out += "Event " + std::to_string(++k) + ": ";
  out += verbalize_event(render_bracketed(query.head), query.relation,
                         query.tail, templates);
  out += ". [" + query.head.span_text() + "] ";
  out += verb_phrase;
  return out;
}

}  // namespace

std::string build_conceptualization_prompt(const PromptQuery& query,
                                           const ExemplarSet& set,
                                           const TemplateTable& templates) {
  if (set.mode != PromptMode::kConceptualization) {
    throw Error("conceptualization prompt needs a conceptualization exemplar set");
  }
  if (query.head.kind() != SpanKind::kInstance) {
    throw Error("conceptualization query must mark an instance");
  }
  return render_prompt(query, set, templates, "can be conceptualized as");
}

std::string build_instantiation_prompt(const PromptQuery& query,
                                       const ExemplarSet& set,
                                       const TemplateTable& templates) {
  if (set.mode != PromptMode::kInstantiation) {
    throw Error("instantiation prompt needs an instantiation exemplar set");
  }
  if (query.head.kind() != SpanKind::kConcept) {
    throw Error("instantiation query must mark a concept");
  }
  return render_prompt(query, set, templates, "can be instantiated as");
}

}  // namespace cskd

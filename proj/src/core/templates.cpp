#include "cskd/core/templates.hpp"

#include <json.hpp>

#include "cskd/core/error.hpp"
#include "cskd/core/text.hpp"

namespace cskd {

TemplateTable TemplateTable::defaults() {
  TemplateTable t;
  t.set(Relation::kXEffect, "as a result, PersonX will");
  t.set(Relation::kOEffect, "as a result, PersonY will");
  t.set(Relation::kXWant, "as a result, PersonX wants");
  t.set(Relation::kOWant, "as a result, PersonY wants");
  t.set(Relation::kXReact, "as a result, PersonX feels");
  t.set(Relation::kOReact, "as a result, PersonY feels");
  t.set(Relation::kXNeed, "before that, PersonX needed");
  t.set(Relation::kXAttr, "PersonX is seen as");
  t.set(Relation::kXIntent, "because PersonX wanted");
  return t;
}

TemplateTable TemplateTable::load(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("template file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("template file must hold a JSON object");
  TemplateTable t = defaults();
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string() || text::trim(value.get<std::string>()).empty()) {
      throw Error("template for '" + key + "' must be a non-empty string");
    }
    t.set(parse_relation(key), value.get<std::string>());
  }
  return t;
}

void TemplateTable::set(Relation r, std::string connective) {
  connectives_[index_of(r)] = std::string(text::trim(connective));
}

std::string TemplateTable::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (Relation r : kAllRelations) j[std::string(cskd::to_string(r))] = connective(r);
  return j.dump();
}

std::string_view strip_terminal_period(std::string_view s) {
  s = text::trim(s);
  while (!s.empty() && (s.back() == '.' || text::is_space(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string render_prompt_prefix(std::string_view head, Relation relation,
                                 const TemplateTable& templates) {
  std::string out(strip_terminal_period(head));
  out += ", ";
  out += templates.connective(relation);
  return out;
}

std::string render_statement(std::string_view head, Relation relation,
                             std::string_view tail,
                             const TemplateTable& templates) {
  std::string out = render_prompt_prefix(head, relation, templates);
  out += ", ";
  out += strip_terminal_period(tail);
  out += '.';
  return out;
}

namespace {

std::string_view strip_article(std::string_view s) {
  for (std::string_view article : {"a ", "an ", "the "}) {
    if (text::starts_with_icase(s, article)) {
      return text::trim(s.substr(article.size()));
    }
  }
  return s;
}

bool starts_with_vowel(std::string_view s) {
  if (s.empty()) return false;
  const char c = static_cast<char>(s.front() | 0x20);
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

}  // namespace

std::string concept_assertion(std::string_view instance,
                              std::string_view concept_text) {
  std::string subject = text::collapse_whitespace(instance);
  if (!subject.empty() && subject.front() >= 'a' && subject.front() <= 'z') {
    subject.front() = static_cast<char>(subject.front() - 'a' + 'A');
  }
  const std::string noun = text::to_lower(
      strip_article(strip_terminal_period(text::collapse_whitespace(concept_text))));
  return subject + " is " + (starts_with_vowel(noun) ? "an " : "a ") + noun +
         ".";
}

std::string conceptualization_statement(std::string_view head,
                                        std::string_view instance,
                                        std::string_view concept_text) {
  return std::string(strip_terminal_period(head)) + ". " +
         concept_assertion(instance, concept_text);
}

}  // namespace cskd

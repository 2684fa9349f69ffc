#pragma once

#include <array>
#include <istream>
#include <string>
#include <string_view>

#include "cskd/core/relation.hpp"

namespace cskd {

// Relation -> connective phrase used to verbalize a triple as a sentence.
class TemplateTable {
 public:
  // as a result / before that / because ... phrasings, one per relation.
  static TemplateTable defaults();

  // JSON object {"xWant": "...", ...}; listed relations override the
  // defaults, unknown keys are an error.
  static TemplateTable load(std::istream& in);

  const std::string& connective(Relation r) const {
    return connectives_[index_of(r)];
  }
  void set(Relation r, std::string connective);

  std::string to_json() const;

  friend bool operator==(const TemplateTable&, const TemplateTable&) = default;

 private:
  std::array<std::string, 9> connectives_;
};

// "<head>, <connective>, <tail>." with exactly one terminal period.
std::string render_statement(std::string_view head, Relation relation,
                             std::string_view tail,
                             const TemplateTable& templates);

// "<head>, <connective>" -- the COMET source / QA question prefix.
std::string render_prompt_prefix(std::string_view head, Relation relation,
                                 const TemplateTable& templates);

// Declarative check of a conceptualization: "<head>. <Instance> is a
// <concept>." with the instance capitalized and the concept lowercased.
std::string conceptualization_statement(std::string_view head,
                                        std::string_view instance,
                                        std::string_view concept_text);

// Second sentence of the above: "<Instance> is a <concept>."
std::string concept_assertion(std::string_view instance,
                              std::string_view concept_text);

// Removes trailing '.' and whitespace.
std::string_view strip_terminal_period(std::string_view s);

}  // namespace cskd

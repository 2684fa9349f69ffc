#include "cskd/prompt/exemplars.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cskd/core/error.hpp"
#include "cskd/core/marked_head.hpp"
#include "cskd/core/text.hpp"

namespace cskd {

namespace detail {
extern const char* const kDefaultConceptualizationExemplars;
extern const char* const kDefaultInstantiationExemplars;
}  // namespace detail

std::string_view to_string(PromptMode m) {
  return m == PromptMode::kConceptualization ? "conceptualization"
                                             : "instantiation";
}

ExemplarSet ExemplarSet::truncated(std::size_t n) const {
  ExemplarSet out = *this;
  if (out.exemplars.size() > n) out.exemplars.resize(n);
  return out;
}

namespace {

std::string string_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error(std::string("missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

Exemplar parse_exemplar(const nlohmann::json& j) {
  Exemplar e;
  e.head_bracketed = string_field(j, "head_bracketed");
  e.relation = parse_relation(string_field(j, "relation"));
  e.tail = string_field(j, "tail");
  e.answer = string_field(j, "answer");
  mark_span(e.head_bracketed);  // exactly one bracket pair
  if (text::trim(e.tail).empty()) throw Error("empty tail");
  if (text::trim(e.answer).empty()) throw Error("empty answer");
  return e;
}

}  // namespace

ExemplarSet load_exemplars(std::istream& in) {
  ExemplarSet set;
  bool have_header = false;
  std::size_t index = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(have_header ? "exemplar " + std::to_string(index + 1) +
                                    ": invalid JSON"
                              : std::string("exemplar header: invalid JSON"));
    }
    if (!have_header) {
      try {
        const std::string mode = string_field(j, "mode");
        if (mode == "conceptualization") {
          set.mode = PromptMode::kConceptualization;
        } else if (mode == "instantiation") {
          set.mode = PromptMode::kInstantiation;
        } else {
          throw Error("unknown mode '" + mode + "'");
        }
        set.task_prompt = string_field(j, "task_prompt");
        set.version = string_field(j, "version");
      } catch (const Error& e) {
        throw Error(std::string("exemplar header: ") + e.what());
      }
      have_header = true;
      continue;
    }
    ++index;
    try {
      set.exemplars.push_back(parse_exemplar(j));
    } catch (const Error& e) {
      throw Error("exemplar " + std::to_string(index) + ": " + e.what());
    }
  }
  if (!have_header) throw Error("exemplar file is empty");
  return set;
}

ExemplarSet load_exemplars_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_exemplars(in);
}

const ExemplarSet& default_exemplars(PromptMode mode) {
  static const ExemplarSet concept_set = [] {
    std::istringstream in(detail::kDefaultConceptualizationExemplars);
    return load_exemplars(in);
  }();
  static const ExemplarSet instance_set = [] {
    std::istringstream in(detail::kDefaultInstantiationExemplars);
    return load_exemplars(in);
  }();
  return mode == PromptMode::kConceptualization ? concept_set : instance_set;
}

}  // namespace cskd

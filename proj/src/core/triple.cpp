#include "cskd/core/triple.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "cskd/core/error.hpp"
#include "cskd/core/text.hpp"
#include "cskd/core/utf8.hpp"

namespace cskd {

void validate(const Triple& t) {
  if (text::trim(t.head).empty()) throw Error("empty head");
  if (text::trim(t.tail).empty()) throw Error("empty tail");
  if (t.head.find("___") != std::string::npos) {
    throw Error("head contains wildcard '___'");
  }
}

std::vector<Triple> TripleFile::triples() const {
  std::vector<Triple> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.triple);
  return out;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

TripleEntry make_entry(std::string id, const std::string& head,
                       const std::string& relation, const std::string& tail,
                       const std::string& bracketed) {
  TripleEntry e;
  e.triple.id = std::move(id);
  e.triple.head = std::string(text::trim(head));
  e.triple.relation = parse_relation(text::trim(relation));
  e.triple.tail = std::string(text::trim(tail));
  validate(e.triple);
  if (!text::trim(bracketed).empty()) {
    e.focus = mark_span(e.triple.head, text::trim(bracketed));
  }
  return e;
}

TripleEntry parse_tsv_line(const std::string& line, std::size_t lineno) {
  const auto fields = split_tabs(line);
  if (fields.size() < 3 || fields.size() > 4) {
    throw Error("expected 3 or 4 tab-separated fields, found " +
                std::to_string(fields.size()));
  }
  return make_entry("t" + std::to_string(lineno), fields[0], fields[1],
                    fields[2], fields.size() == 4 ? fields[3] : "");
}

TripleEntry parse_jsonl_line(const std::string& line, std::size_t lineno) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("expected a JSON object");
  auto field = [&](const char* key, bool required) -> std::string {
    if (!j.contains(key) || j[key].is_null()) {
      if (required) throw Error(std::string("missing field '") + key + "'");
      return "";
    }
    if (!j[key].is_string()) {
      throw Error(std::string("field '") + key + "' must be a string");
    }
    return j[key].get<std::string>();
  };
  std::string id = field("id", false);
  if (id.empty()) id = "t" + std::to_string(lineno);
  return make_entry(std::move(id), field("head", true),
                    field("relation", true), field("tail", true),
                    field("head_bracketed", false));
}

}  // namespace

TripleFile parse_triple_file(std::istream& in, TripleFormat format) {
  const std::string content{std::istreambuf_iterator<char>(in),
                            std::istreambuf_iterator<char>()};
  if (!utf8::valid(content)) throw Error("input is not valid UTF-8");

  TripleFile out;
  std::istringstream lines(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    try {
      out.entries.push_back(format == TripleFormat::kTsv
                                ? parse_tsv_line(line, lineno)
                                : parse_jsonl_line(line, lineno));
    } catch (const Error& e) {
      out.errors.push_back({lineno, e.what()});
    }
  }
  return out;
}

TripleFormat format_for_path(const std::string& path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return ends_with(".jsonl") || ends_with(".json") ? TripleFormat::kJsonl
                                                   : TripleFormat::kTsv;
}

TripleFile read_triple_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return parse_triple_file(in, format_for_path(path));
}

std::size_t write_triples(const std::vector<TripleEntry>& entries,
                          std::ostream& out) {
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    j["id"] = e.triple.id;
    j["head"] = e.triple.head;
    j["relation"] = std::string(to_string(e.triple.relation));
    j["tail"] = e.triple.tail;
    if (e.focus) j["head_bracketed"] = render_bracketed(*e.focus);
    out << j.dump() << '\n';
  }
  if (!out) throw Error("write failure while writing triples");
  return entries.size();
}

}  // namespace cskd

#include "cskd/core/records.hpp"

#include <fstream>

#include <json.hpp>

#include "cskd/core/error.hpp"
#include "cskd/core/text.hpp"

namespace cskd {

using Json = nlohmann::ordered_json;

std::string ConceptRecord::source_head() const {
  return instantiate_head(abstract_head, instance);
}

namespace {

void check_common(const std::string& id, const std::optional<double>& score,
                  int round) {
  if (id.empty()) throw Error("record without id");
  if (score && !(*score >= 0.0 && *score <= 1.0)) {
    throw Error("record " + id + ": score " + std::to_string(*score) +
                " outside [0,1]");
  }
  if (round < 1) throw Error("record " + id + ": round must be >= 1");
}

Json span_json(Span s) { return Json::array({s.start, s.end}); }

Json score_json(const std::optional<double>& s) {
  return s ? Json(*s) : Json(nullptr);
}

}  // namespace

void validate(const ConceptRecord& r) {
  check_common(r.id, r.score, r.round);
  if (text::trim(r.instance).empty()) throw Error("record " + r.id + ": empty instance");
  if (r.abstract_head.kind() != SpanKind::kConcept ||
      r.abstract_head.span_text() != r.concept_text) {
    throw Error("record " + r.id + ": abstract head span does not hold concept");
  }
}

void validate(const InstantiationRecord& r) {
  check_common(r.id, r.score, r.round);
  if (r.new_head.kind() != SpanKind::kInstance ||
      r.new_head.span_text() != r.instance) {
    throw Error("record " + r.id + ": new head span does not hold instance");
  }
}

std::string to_jsonl_line(const ConceptRecord& r) {
  Json j;
  j["id"] = r.id;
  j["kind"] = "concept";
  j["source_id"] = r.source_triple_id;
  j["head"] = r.abstract_head.text();
  j["span"] = span_json(r.abstract_head.span());
  j["relation"] = std::string(to_string(r.relation));
  j["tail"] = r.tail;
  j["text"] = r.concept_text;
  j["instance"] = r.instance;
  j["score"] = score_json(r.score);
  j["round"] = r.round;
  j["generator"] = r.generator_id;
  return j.dump();
}

std::string to_jsonl_line(const InstantiationRecord& r) {
  Json j;
  j["id"] = r.id;
  j["kind"] = "instantiation";
  j["source_id"] = r.source_concept_record_id;
  j["head"] = r.new_head.text();
  j["span"] = span_json(r.new_head.span());
  j["relation"] = std::string(to_string(r.relation));
  j["tail"] = r.tail;
  j["text"] = r.instance;
  j["score"] = score_json(r.score);
  j["round"] = r.round;
  j["generator"] = r.generator_id;
  return j.dump();
}

AnyRecord parse_record_line(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
    const std::string kind = j.at("kind").get<std::string>();
    const auto span = j.at("span");
    if (!span.is_array() || span.size() != 2) throw Error("span must be [start,end]");
    const Span s{span[0].get<std::size_t>(), span[1].get<std::size_t>()};
    std::optional<double> score;
    if (!j.at("score").is_null()) score = j["score"].get<double>();
    const Relation rel = parse_relation(j.at("relation").get<std::string>());
    const std::string head = j.at("head").get<std::string>();

    if (kind == "concept") {
      ConceptRecord r{
          .id = j.at("id").get<std::string>(),
          .source_triple_id = j.at("source_id").get<std::string>(),
          .relation = rel,
          .tail = j.at("tail").get<std::string>(),
          .instance = j.at("instance").get<std::string>(),
          .concept_text = j.at("text").get<std::string>(),
          .abstract_head = MarkedHead(head, s, SpanKind::kConcept),
          .score = score,
          .round = j.at("round").get<int>(),
          .generator_id = j.at("generator").get<std::string>(),
      };
      validate(r);
      return r;
    }
    if (kind == "instantiation") {
      InstantiationRecord r{
          .id = j.at("id").get<std::string>(),
          .source_concept_record_id = j.at("source_id").get<std::string>(),
          .relation = rel,
          .tail = j.at("tail").get<std::string>(),
          .instance = j.at("text").get<std::string>(),
          .new_head = MarkedHead(head, s, SpanKind::kInstance),
          .score = score,
          .round = j.at("round").get<int>(),
          .generator_id = j.at("generator").get<std::string>(),
      };
      validate(r);
      return r;
    }
    throw Error("unknown record kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed record: ") + e.what());
  }
}

namespace {

template <typename Range>
std::size_t write_lines(const Range& records, std::ostream& out) {
  std::size_t n = 0;
  for (const auto& r : records) {
    out << to_jsonl_line(r) << '\n';
    ++n;
  }
  out.flush();
  if (!out) throw Error("write failure while writing records");
  return n;
}

}  // namespace

std::size_t write_records(std::span<const AnyRecord> records, std::ostream& out) {
  std::size_t n = 0;
  for (const auto& r : records) {
    std::visit([&](const auto& rec) { out << to_jsonl_line(rec) << '\n'; }, r);
    ++n;
  }
  out.flush();
  if (!out) throw Error("write failure while writing records");
  return n;
}

std::size_t write_records(std::span<const ConceptRecord> records,
                          std::ostream& out) {
  return write_lines(records, out);
}

std::size_t write_records(std::span<const InstantiationRecord> records,
                          std::ostream& out) {
  return write_lines(records, out);
}

std::vector<AnyRecord> read_records(std::istream& in) {
  std::vector<AnyRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(parse_record_line(line));
    } catch (const Error& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<AnyRecord> read_records_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_records(in);
}

void split_records(const std::vector<AnyRecord>& all,
                   std::vector<ConceptRecord>& concepts,
                   std::vector<InstantiationRecord>& instantiations) {
  for (const auto& r : all) {
    if (const auto* c = std::get_if<ConceptRecord>(&r)) {
      concepts.push_back(*c);
    } else {
      instantiations.push_back(std::get<InstantiationRecord>(r));
    }
  }
}

}  // namespace cskd

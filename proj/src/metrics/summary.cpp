#include "cskd/metrics/summary.hpp"

#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "cskd/core/text.hpp"
#include "cskd/critic/filter.hpp"
#include "cskd/metrics/bleu.hpp"

namespace cskd {

using text::normalize_key;

namespace {

std::map<Relation, std::size_t> empty_histogram() {
  std::map<Relation, std::size_t> h;
  for (Relation r : kAllRelations) h[r] = 0;
  return h;
}

double ratio(std::size_t a, std::size_t b) {
  return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
}

nlohmann::ordered_json histogram_json(const std::map<Relation, std::size_t>& h) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (Relation r : kAllRelations) j[std::string(to_string(r))] = h.at(r);
  return j;
}

}  // namespace

std::map<Relation, std::size_t> relation_histogram(const std::vector<AnyRecord>& records) {
  auto h = empty_histogram();
  for (const auto& r : records) ++h[std::visit([](const auto& x) { return x.relation; }, r)];
  return h;
}

std::map<Relation, std::size_t> relation_histogram(const std::vector<Triple>& triples) {
  auto h = empty_histogram();
  for (const auto& t : triples) ++h[t.relation];
  return h;
}

Summary summarize(const std::vector<AnyRecord>& records, const std::vector<RoundStats>& rounds) {
  Summary s;
  std::vector<ConceptRecord> concepts;
  std::vector<InstantiationRecord> insts;
  split_records(records, concepts, insts);

  s.total_concepts = concepts.size();
  s.total_instantiations = insts.size();
  std::map<std::string, std::set<std::string>> by_event, by_instance;
  std::set<std::string> unique_concepts, unique_insts;
  std::map<std::string, const ConceptRecord*> concept_by_id;
  std::vector<GroupedText> grouped;
  for (const auto& c : concepts) {
    const std::string event = normalize_key(c.source_head());
    const std::string inst = normalize_key(c.instance);
    const std::string conc = normalize_key(c.concept_text);
    by_event[event].insert(conc);
    by_instance[inst].insert(conc);
    unique_concepts.insert(conc);
    concept_by_id[c.id] = &c;
    grouped.push_back({c.concept_text, event + '\x1f' + inst});
  }
  s.unique_events = by_event.size();
  s.unique_instances = by_instance.size();
  s.unique_concepts = unique_concepts.size();
  std::size_t unique_per_event = 0, unique_per_instance = 0;
  for (const auto& [k, v] : by_event) unique_per_event += v.size();
  for (const auto& [k, v] : by_instance) unique_per_instance += v.size();
  s.avg_concepts_per_event = ratio(s.total_concepts, s.unique_events);
  s.avg_unique_concepts_per_event = ratio(unique_per_event, s.unique_events);
  s.avg_concepts_per_instance = ratio(s.total_concepts, s.unique_instances);
  s.avg_unique_concepts_per_instance = ratio(unique_per_instance, s.unique_instances);
  s.concept_uniqueness = soft_uniqueness_ratio(grouped);

  std::vector<HeadPair> pairs;
  for (const auto& i : insts) {
    unique_insts.insert(normalize_key(i.instance));
    const auto it = concept_by_id.find(i.source_concept_record_id);
    if (it != concept_by_id.end()) pairs.push_back({i.new_head.text(), it->second->source_head()});
  }
  s.unique_instantiations = unique_insts.size();
  s.instantiation_novelty = novelty_ratio(pairs);

  std::vector<AnyRecord> cr(concepts.begin(), concepts.end());
  std::vector<AnyRecord> ir(insts.begin(), insts.end());
  s.concept_relations = relation_histogram(cr);
  s.instantiation_relations = relation_histogram(ir);
  s.rounds = rounds;
  return s;
}

Summary summarize(const KnowledgeStore& store) {
  std::vector<RoundStats> rounds;
  for (const auto& r : store.rounds) rounds.push_back(r.stats);
  return summarize(store.records(), rounds);
}

nlohmann::ordered_json to_json(const Summary& s) {
  nlohmann::ordered_json j;
  j["conceptualization"] = {{"total", s.total_concepts}, {"unique", s.unique_concepts}};
  j["instantiation"] = {{"total", s.total_instantiations}, {"unique", s.unique_instantiations}};
  j["unique_events"] = s.unique_events;
  j["unique_instances"] = s.unique_instances;
  j["avg_concepts_per_event"] = s.avg_concepts_per_event;
  j["avg_unique_concepts_per_event"] = s.avg_unique_concepts_per_event;
  j["avg_concepts_per_instance"] = s.avg_concepts_per_instance;
  j["avg_unique_concepts_per_instance"] = s.avg_unique_concepts_per_instance;
  j["concept_soft_uniqueness"] = s.concept_uniqueness;
  j["instantiation_novelty"] = s.instantiation_novelty;
  j["relations"] = {{"conceptualization", histogram_json(s.concept_relations)},
                    {"instantiation", histogram_json(s.instantiation_relations)}};
  j["rounds"] = nlohmann::ordered_json::array();
  for (const auto& r : s.rounds) j["rounds"].push_back(to_json(r));
  return j;
}

std::string to_text(const Summary& s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "                       total    unique\n";
  os << "conceptualizations  " << std::setw(8) << s.total_concepts << "  " << std::setw(8)
     << s.unique_concepts << "\n";
  os << "instantiations      " << std::setw(8) << s.total_instantiations << "  " << std::setw(8)
     << s.unique_instantiations << "\n";
  os << "unique events       " << std::setw(8) << s.unique_events << "\n";
  os << "unique instances    " << std::setw(8) << s.unique_instances << "\n";
  os << "avg concepts/event            " << s.avg_concepts_per_event << "\n";
  os << "avg unique concepts/event     " << s.avg_unique_concepts_per_event << "\n";
  os << "avg concepts/instance         " << s.avg_concepts_per_instance << "\n";
  os << "avg unique concepts/instance  " << s.avg_unique_concepts_per_instance << "\n";
  os << "concept soft uniqueness       " << 100.0 * s.concept_uniqueness << "%\n";
  os << "instantiation novelty         " << 100.0 * s.instantiation_novelty << "%\n";
  os << "\nrelation        concepts  instantiations\n";
  for (Relation r : kAllRelations) {
    os << std::left << std::setw(14) << to_string(r) << std::right << std::setw(10)
       << s.concept_relations.at(r) << std::setw(16) << s.instantiation_relations.at(r) << "\n";
  }
  for (const auto& r : s.rounds) {
    os << "\nround " << r.round << ": inputs " << r.inputs << ", concepts " << r.concepts_kept
       << "/" << r.concepts_generated << " kept, instantiations " << r.instantiations_kept
       << "/" << r.instantiations_generated << " kept\n";
    os << "  acceptance    tau:";
    for (const auto& [tau, ratio] : r.concept_acceptance_by_tau) os << std::setw(8) << tau;
    os << "\n  conceptualization ";
    for (const auto& [tau, ratio] : r.concept_acceptance_by_tau) os << std::setw(8) << ratio;
    os << "\n  instantiation     ";
    for (const auto& [tau, ratio] : r.instantiation_acceptance_by_tau) os << std::setw(8) << ratio;
    os << "\n";
  }
  return os.str();
}

}  // namespace cskd

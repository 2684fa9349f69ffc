#include "cskd/distill/store.hpp"

#include <filesystem>
#include <sstream>

#include "cskd/core/error.hpp"
#include "cskd/core/fileio.hpp"
#include "cskd/critic/filter.hpp"

namespace cskd {

namespace fs = std::filesystem;

namespace {

nlohmann::ordered_json grid_json(const std::map<double, double>& g) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [tau, ratio] : g) j[tau_key(tau)] = ratio;
  return j;
}

std::map<double, double> grid_from_json(const nlohmann::json& j) {
  std::map<double, double> g;
  for (const auto& [k, v] : j.items()) g[std::stod(k)] = v.get<double>();
  return g;
}

std::string round_dir(const std::string& dir, int round) {
  return (fs::path(dir) / ("round-" + std::to_string(round))).string();
}

template <class R>
std::string jsonl(const std::vector<R>& records) {
  std::ostringstream os;
  write_records(std::span<const R>(records), os);
  return os.str();
}

std::string errors_jsonl(const std::vector<ErrorEntry>& errors) {
  std::string out;
  for (const auto& e : errors) {
    nlohmann::ordered_json j;
    j["stage"] = e.stage;
    j["item_id"] = e.item_id;
    j["message"] = e.message;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<AnyRecord> read_jsonl_records(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_records(in);
}

}  // namespace

nlohmann::ordered_json to_json(const RoundStats& s) {
  nlohmann::ordered_json j;
  j["round"] = s.round;
  j["inputs"] = s.inputs;
  j["concepts_generated"] = s.concepts_generated;
  j["concepts_kept"] = s.concepts_kept;
  j["instantiations_generated"] = s.instantiations_generated;
  j["instantiations_kept"] = s.instantiations_kept;
  j["duplicates"] = s.duplicates;
  j["failures"] = s.failures;
  j["rejects_by_reason"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.rejects_by_reason) j["rejects_by_reason"][k] = v;
  j["acceptance_by_tau"] = {{"concept", grid_json(s.concept_acceptance_by_tau)},
                            {"instantiation", grid_json(s.instantiation_acceptance_by_tau)}};
  return j;
}

RoundStats round_stats_from_json(const nlohmann::json& j) {
  RoundStats s;
  try {
    s.round = j.at("round").get<int>();
    s.inputs = j.at("inputs").get<std::size_t>();
    s.concepts_generated = j.at("concepts_generated").get<std::size_t>();
    s.concepts_kept = j.at("concepts_kept").get<std::size_t>();
    s.instantiations_generated = j.at("instantiations_generated").get<std::size_t>();
    s.instantiations_kept = j.at("instantiations_kept").get<std::size_t>();
    s.duplicates = j.at("duplicates").get<std::size_t>();
    s.failures = j.at("failures").get<std::size_t>();
    for (const auto& [k, v] : j.at("rejects_by_reason").items()) {
      s.rejects_by_reason[k] = v.get<std::size_t>();
    }
    const auto& acc = j.at("acceptance_by_tau");
    s.concept_acceptance_by_tau = grid_from_json(acc.at("concept"));
    s.instantiation_acceptance_by_tau = grid_from_json(acc.at("instantiation"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed round stats: ") + e.what());
  }
  return s;
}

std::vector<AnyRecord> KnowledgeStore::records() const {
  std::vector<AnyRecord> out;
  for (const auto& r : rounds) {
    out.insert(out.end(), r.concepts.begin(), r.concepts.end());
    out.insert(out.end(), r.instantiations.begin(), r.instantiations.end());
  }
  return out;
}

std::size_t KnowledgeStore::record_count() const {
  std::size_t n = 0;
  for (const auto& r : rounds) n += r.concepts.size() + r.instantiations.size();
  return n;
}

void append_round(const std::string& dir, const RoundOutput& round,
                  std::size_t cursor, const std::string& config_hash) {
  const std::string rd = round_dir(dir, round.round);
  std::vector<AnyRecord> kept(round.concepts.begin(), round.concepts.end());
  kept.insert(kept.end(), round.instantiations.begin(), round.instantiations.end());
  std::vector<AnyRecord> dropped(round.dropped_concepts.begin(),
                                 round.dropped_concepts.end());
  dropped.insert(dropped.end(), round.dropped_instantiations.begin(),
                 round.dropped_instantiations.end());
  write_file_atomic(rd + "/records.jsonl", jsonl(kept));
  write_file_atomic(rd + "/dropped.jsonl", jsonl(dropped));
  write_file_atomic(rd + "/errors.jsonl", errors_jsonl(round.errors));
  write_file_atomic(rd + "/stats.json", to_json(round.stats).dump(2) + "\n");

  nlohmann::ordered_json m;
  m["version"] = kCheckpointVersion;
  m["round"] = round.round;
  m["cursor"] = cursor;
  m["config_hash"] = config_hash;
  write_file_atomic((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
}

void save_checkpoint(const Checkpoint& state, const std::string& dir) {
  if (state.store.rounds.size() != static_cast<std::size_t>(state.completed_rounds)) {
    throw Error("checkpoint round count does not match store");
  }
  std::size_t cursor = 0;
  for (const auto& r : state.store.rounds) {
    cursor += r.concepts.size() + r.instantiations.size();
    append_round(dir, r, cursor, state.config_hash);
  }
  if (state.store.rounds.empty()) {
    nlohmann::ordered_json m;
    m["version"] = kCheckpointVersion;
    m["round"] = 0;
    m["cursor"] = 0;
    m["config_hash"] = state.config_hash;
    write_file_atomic((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
  }
}

bool has_checkpoint(const std::string& dir) {
  return fs::exists(fs::path(dir) / "manifest.json");
}

Checkpoint load_checkpoint(const std::string& dir, const std::string& expected_hash) {
  const std::string manifest = (fs::path(dir) / "manifest.json").string();
  if (!fs::exists(manifest)) throw Error("no checkpoint manifest in " + dir);
  Checkpoint cp;
  try {
    const auto m = nlohmann::json::parse(read_file(manifest));
    if (m.at("version").get<int>() != kCheckpointVersion) {
      throw Error("unsupported checkpoint version in " + manifest);
    }
    cp.completed_rounds = m.at("round").get<int>();
    cp.cursor = m.at("cursor").get<std::size_t>();
    cp.config_hash = m.at("config_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed checkpoint manifest: " + std::string(e.what()));
  }
  if (!expected_hash.empty() && cp.config_hash != expected_hash) {
    throw Error("checkpoint in " + dir + " was written with a different configuration (" +
                cp.config_hash + " vs " + expected_hash + ")");
  }
  std::size_t cursor = 0;
  for (int k = 1; k <= cp.completed_rounds; ++k) {
    const std::string rd = round_dir(dir, k);
    RoundOutput r;
    r.round = k;
    split_records(read_jsonl_records(rd + "/records.jsonl"), r.concepts, r.instantiations);
    split_records(read_jsonl_records(rd + "/dropped.jsonl"), r.dropped_concepts,
                  r.dropped_instantiations);
    std::istringstream errs(read_file(rd + "/errors.jsonl"));
    for (std::string line; std::getline(errs, line);) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      r.errors.push_back({j.at("stage").get<std::string>(), j.at("item_id").get<std::string>(),
                          j.at("message").get<std::string>()});
    }
    r.stats = round_stats_from_json(nlohmann::json::parse(read_file(rd + "/stats.json")));
    cursor += r.concepts.size() + r.instantiations.size();
    cp.store.rounds.push_back(std::move(r));
  }
  if (cursor != cp.cursor) {
    throw Error("checkpoint cursor " + std::to_string(cp.cursor) + " does not match " +
                std::to_string(cursor) + " stored records");
  }
  return cp;
}

}  // namespace cskd

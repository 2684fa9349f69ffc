#include "cskd/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cskd/core/error.hpp"
#include "cskd/core/fileio.hpp"
#include "cskd/core/hash.hpp"
#include "cskd/core/records.hpp"
#include "cskd/core/triple.hpp"
#include "cskd/critic/filter.hpp"
#include "cskd/distill/distiller.hpp"
#include "cskd/metrics/summary.hpp"
#include "cskd/metrics/taxonomy.hpp"
#include "cskd/synth/synth.hpp"

namespace cskd::cli {

namespace fs = std::filesystem;

namespace {

struct GenOptions {
  std::string backend = "mock";
  std::string endpoint;
  std::string instance_endpoint;
  std::string model = "default";
  std::string critic = "heuristic";
  std::string critic_endpoint;
  std::uint64_t seed = 0;
  std::size_t max_in_flight = 8;
  double rate = 0.0;
  std::string concept_exemplars;
  std::string instance_exemplars;
  std::string templates;
};

struct LoopOptions {
  int rounds = 1;
  int n_c = kDefaultConceptSamples;
  int per_concept = 1;
  double tau = kDefaultTau;
  std::string checkpoint;
};

void add_gen_options(CLI::App* sub, GenOptions& g) {
  sub->add_option("--backend", g.backend, "Generator backend")
      ->check(CLI::IsMember({"mock", "remote"}))
      ->capture_default_str();
  sub->add_option("--endpoint", g.endpoint, "Chat-completions URL for the remote backend");
  sub->add_option("--instance-endpoint", g.instance_endpoint,
                  "Separate URL for the instantiation generator (defaults to --endpoint)");
  sub->add_option("--model", g.model, "Model name sent to the remote backend")
      ->capture_default_str();
  sub->add_option("--critic", g.critic, "Critic kind")
      ->check(CLI::IsMember({"heuristic", "remote"}))
      ->capture_default_str();
  sub->add_option("--critic-endpoint", g.critic_endpoint,
                  "Base URL serving /score and /score_batch");
  sub->add_option("--seed", g.seed, "Seed for the mock backend and heuristic critic")
      ->capture_default_str();
  sub->add_option("--max-in-flight", g.max_in_flight, "Concurrent backend requests")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--rate", g.rate, "Backend calls per second, 0 for unlimited")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--concept-exemplars", g.concept_exemplars, "Conceptualization exemplar JSONL")
      ->check(CLI::ExistingFile);
  sub->add_option("--instance-exemplars", g.instance_exemplars, "Instantiation exemplar JSONL")
      ->check(CLI::ExistingFile);
  sub->add_option("--templates", g.templates, "JSON relation -> connective overrides")
      ->check(CLI::ExistingFile);
}

void add_tau(CLI::App* sub, double& tau) {
  sub->add_option("--tau", tau, "Critic threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

void add_loop_options(CLI::App* sub, LoopOptions& l) {
  sub->add_option("--rounds", l.rounds, "Conceptualize/instantiate rounds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--nc", l.n_c, "Conceptualization samples per event")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--instantiations-per-concept", l.per_concept,
                  "Instantiation samples per kept concept")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_tau(sub, l.tau);
}

TemplateTable load_templates(const GenOptions& g) {
  if (g.templates.empty()) return TemplateTable::defaults();
  std::ifstream in(g.templates);
  if (!in) throw Error("cannot open " + g.templates);
  return TemplateTable::load(in);
}

LoopConfig make_config(const GenOptions& g, const LoopOptions& l) {
  LoopConfig cfg;
  cfg.rounds = l.rounds;
  cfg.n_c = l.n_c;
  cfg.instantiations_per_concept = l.per_concept;
  cfg.tau = l.tau;
  cfg.max_in_flight = g.max_in_flight;
  cfg.rate = g.rate;
  cfg.checkpoint_dir = l.checkpoint;
  if (!g.concept_exemplars.empty()) cfg.concept_exemplars = load_exemplars_file(g.concept_exemplars);
  if (!g.instance_exemplars.empty()) {
    cfg.instance_exemplars = load_exemplars_file(g.instance_exemplars);
  }
  cfg.templates = load_templates(g);
  cfg.validate();
  return cfg;
}

Pipeline make_pipeline(const GenOptions& g) {
  Pipeline p;
  if (g.backend == "mock") {
    p.conceptualizer = std::make_shared<Gateway>(
        configure_backend(MockSpec{g.seed, mock_concept_vocabulary(), true}));
    p.instantiator = std::make_shared<Gateway>(
        configure_backend(MockSpec{mix64(g.seed), mock_instance_vocabulary(), false}));
  } else {
    if (g.endpoint.empty()) throw Error("--backend remote requires --endpoint");
    RemoteSpec spec;
    spec.endpoint = g.endpoint;
    spec.model_name = g.model;
    p.conceptualizer = std::make_shared<Gateway>(configure_backend(spec));
    if (!g.instance_endpoint.empty()) spec.endpoint = g.instance_endpoint;
    p.instantiator = std::make_shared<Gateway>(configure_backend(spec));
  }
  if (g.critic == "heuristic") {
    p.critic = make_critic(HeuristicSpec{g.seed});
  } else {
    if (g.critic_endpoint.empty()) throw Error("--critic remote requires --critic-endpoint");
    RemoteScorerSpec spec;
    spec.endpoint = g.critic_endpoint;
    p.critic = make_critic(spec);
  }
  return p;
}

// Every option of the subcommand, with the value in effect.
nlohmann::ordered_json snapshot(const CLI::App* sub) {
  nlohmann::ordered_json j;
  j["command"] = sub->get_name();
  j["options"] = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "help-all" || opt->get_lnames().empty()) continue;
    if (opt->get_type_size() == 0) {
      j["options"][name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& r = opt->results();
      j["options"][name] = r.size() == 1 ? nlohmann::ordered_json(r.front())
                                         : nlohmann::ordered_json(r);
    } else {
      j["options"][name] = opt->get_default_str();
    }
  }
  return j;
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_snapshot(const std::string& dir, nlohmann::ordered_json j) {
  write_file_atomic(path_in(dir, "config.json"), j.dump(2) + "\n");
}

template <class R>
std::string records_text(const std::vector<R>& rs) {
  std::ostringstream os;
  write_records(std::span<const R>(rs), os);
  return os.str();
}

std::string errors_text(const std::vector<ErrorEntry>& es) {
  std::string s;
  for (const auto& e : es) {
    nlohmann::ordered_json j;
    j["stage"] = e.stage;
    j["item_id"] = e.item_id;
    j["message"] = e.message;
    s += j.dump() + "\n";
  }
  return s;
}

template <class T>
std::string jsonl_text(const std::vector<T>& items) {
  std::ostringstream os;
  write_jsonl(items, os);
  return os.str();
}

// A distill output directory stands for its records.jsonl.
std::string record_file(const std::string& input) {
  if (!fs::is_directory(input)) return input;
  const std::string f = path_in(input, "records.jsonl");
  if (!fs::is_regular_file(f)) throw Error(input + ": directory holds no records.jsonl");
  return f;
}

bool looks_like_records(const std::string& path) {
  if (format_for_path(path) != TripleFormat::kJsonl) return false;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      return nlohmann::json::parse(line).contains("kind");
    } catch (const nlohmann::json::exception&) {
      return false;
    }
  }
  return false;
}

TripleFile read_triples_reporting(const std::string& path, std::ostream& err) {
  TripleFile f = read_triple_file(path);
  for (const auto& e : f.errors) err << path << ":" << e.line << ": " << e.message << "\n";
  return f;
}

// Triples from a triple file, or from a record file using the given kinds.
std::vector<Triple> load_triples(const std::string& input, const std::string& kind,
                                 std::ostream& err) {
  const std::string path = record_file(input);
  if (!looks_like_records(path)) return read_triples_reporting(path, err).triples();
  const auto all = read_records_file(path);
  std::vector<AnyRecord> picked;
  for (const auto& r : all) {
    const bool is_concept = std::holds_alternative<ConceptRecord>(r);
    if (kind == "all" || (kind == "concept") == is_concept) picked.push_back(r);
  }
  return record_triples(picked);
}

// A distill output dir, a checkpoint dir, or a record file.
Summary summarize_input(const std::string& input, std::vector<std::string>* concept_texts) {
  std::vector<AnyRecord> records;
  std::vector<RoundStats> rounds;
  if (fs::is_directory(input)) {
    std::string dir = input;
    if (!has_checkpoint(dir) && has_checkpoint(path_in(dir, "checkpoint"))) {
      dir = path_in(dir, "checkpoint");
    }
    const auto cp = load_checkpoint(dir);
    records = cp.store.records();
    for (const auto& r : cp.store.rounds) rounds.push_back(r.stats);
  } else {
    records = read_records_file(input);
  }
  if (concept_texts) {
    for (const auto& r : records) {
      if (const auto* c = std::get_if<ConceptRecord>(&r)) concept_texts->push_back(c->concept_text);
    }
  }
  return summarize(records, rounds);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Commonsense knowledge distillation toolkit", "cskd"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::string input, output;
  GenOptions gen;
  LoopOptions loop;

  auto* ingest = app.add_subcommand("ingest", "Parse a TSV/JSONL triple file and normalize it");
  auto* conceptualize =
      app.add_subcommand("conceptualize", "Generate, score and filter conceptualizations");
  auto* instantiate =
      app.add_subcommand("instantiate", "Instantiate concept records, score and filter");
  auto* distill = app.add_subcommand("distill", "Run the full conceptualize/instantiate loop");
  auto* filter = app.add_subcommand("filter", "Re-threshold scored records");
  auto* stats = app.add_subcommand("stats", "Summarize a record store");
  auto* synth_disc = app.add_subcommand("synth-disc", "Discrimination pairs with negatives");
  auto* synth_comet = app.add_subcommand("synth-comet", "COMET source/target lines");
  auto* synth_qa = app.add_subcommand("synth-qa", "Multiple-choice QA items");

  for (auto* sub : {ingest, conceptualize, instantiate, distill, filter, stats, synth_disc,
                    synth_comet, synth_qa}) {
    sub->add_option("--input", input, "Input file or directory")->required();
  }
  for (auto* sub : {ingest, conceptualize, instantiate, distill, filter, synth_disc, synth_comet,
                    synth_qa}) {
    sub->add_option("--out", output, "Output directory")->required();
  }
  stats->add_option("--out", output, "Also write stats.json here");

  for (auto* sub : {conceptualize, instantiate, distill}) add_gen_options(sub, gen);
  for (auto* sub : {conceptualize, instantiate, distill}) add_loop_options(sub, loop);
  distill->add_option("--checkpoint", loop.checkpoint,
                      "Checkpoint directory (default <out>/checkpoint)");

  double filter_tau = kDefaultTau;
  add_tau(filter, filter_tau);

  std::string taxonomy;
  std::size_t top_concepts = 0, top_hypernyms = 20;
  bool stats_json = false;
  stats->add_option("--taxonomy", taxonomy, "TSV instance/hypernym/weight file")
      ->check(CLI::ExistingFile);
  stats->add_option("--top-concepts", top_concepts,
                    "Use only the N most frequent concepts for hypernyms (0 = all)")
      ->capture_default_str();
  stats->add_option("--top", top_hypernyms, "Hypernym buckets to print (0 = all)")
      ->capture_default_str();
  stats->add_flag("--json", stats_json, "Print JSON instead of a table");

  std::uint64_t synth_seed = 0;
  std::string disc_task = "event", triple_kind = "instantiation";
  std::size_t option_count = kDefaultOptionCount, sample = 0;
  bool stratify = false;
  for (auto* sub : {synth_disc, synth_qa}) {
    sub->add_option("--seed", synth_seed, "Sampling seed")->capture_default_str();
  }
  synth_disc->add_option("--task", disc_task, "event or triple")
      ->check(CLI::IsMember({"event", "triple"}))
      ->capture_default_str();
  for (auto* sub : {synth_comet, synth_qa}) {
    sub->add_option("--kind", triple_kind, "Record kind to use when --input holds records")
        ->check(CLI::IsMember({"instantiation", "concept", "all"}))
        ->capture_default_str();
  }
  synth_qa->add_option("--options", option_count, "Options per question")
      ->check(CLI::Range(std::size_t{2}, std::size_t{26}))
      ->capture_default_str();
  synth_qa->add_option("--sample", sample, "Sample this many triples first (0 = all)")
      ->capture_default_str();
  synth_qa->add_flag("--stratify", stratify,
                     "Sample and draw distractors within each relation");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (const auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    if (sub == ingest) {
      const TripleFile f = read_triples_reporting(input, err);
      std::ostringstream os;
      write_triples(f.entries, os);
      write_file_atomic(path_in(output, "triples.jsonl"), os.str());
      std::string errs;
      for (const auto& e : f.errors) {
        errs += nlohmann::ordered_json{{"line", e.line}, {"message", e.message}}.dump() + "\n";
      }
      write_file_atomic(path_in(output, "errors.jsonl"), errs);
      write_snapshot(output, snapshot(sub));
      std::size_t focused = 0;
      for (const auto& e : f.entries) focused += e.focus ? 1 : 0;
      out << f.entries.size() << " triples (" << focused << " with a marked instance), "
          << f.errors.size() << " malformed lines\n";
      for (const auto& [r, n] : relation_histogram(f.triples())) {
        out << "  " << to_string(r) << "\t" << n << "\n";
      }
      return kExitOk;
    }

    if (sub == conceptualize || sub == instantiate) {
      const LoopConfig cfg = make_config(gen, loop);
      const Pipeline p = make_pipeline(gen);
      RoundOutput r;
      if (sub == conceptualize) {
        r = conceptualize_stage(inputs_from_entries(read_triples_reporting(input, err).entries),
                                cfg, p);
        write_file_atomic(path_in(output, "concepts.jsonl"), records_text(r.concepts));
        write_file_atomic(path_in(output, "dropped.jsonl"), records_text(r.dropped_concepts));
      } else {
        std::vector<ConceptRecord> concepts;
        std::vector<InstantiationRecord> ignored;
        split_records(read_records_file(record_file(input)), concepts, ignored);
        r = instantiate_stage(concepts, cfg, p);
        write_file_atomic(path_in(output, "instantiations.jsonl"), records_text(r.instantiations));
        write_file_atomic(path_in(output, "dropped.jsonl"),
                          records_text(r.dropped_instantiations));
      }
      write_file_atomic(path_in(output, "errors.jsonl"), errors_text(r.errors));
      write_file_atomic(path_in(output, "stats.json"), to_json(r.stats).dump(2) + "\n");
      auto snap = snapshot(sub);
      snap["config_hash"] = config_hash(cfg, p);
      write_snapshot(output, snap);
      out << "kept " << r.concepts.size() + r.instantiations.size() << " of "
          << r.stats.concepts_generated + r.stats.instantiations_generated << " scored ("
          << r.errors.size() << " failures)\n";
      return kExitOk;
    }

    if (sub == distill) {
      if (loop.checkpoint.empty()) loop.checkpoint = path_in(output, "checkpoint");
      const LoopConfig cfg = make_config(gen, loop);
      const Pipeline p = make_pipeline(gen);
      const auto seeds = inputs_from_entries(read_triples_reporting(input, err).entries);
      if (seeds.empty()) throw Error(input + " holds no triples with a bracketed instance");
      const KnowledgeStore store = run_loop(seeds, cfg, p);
      const auto records = store.records();
      std::ostringstream os;
      write_records(std::span<const AnyRecord>(records), os);
      write_file_atomic(path_in(output, "records.jsonl"), os.str());
      const Summary s = summarize(store);
      write_file_atomic(path_in(output, "stats.json"), to_json(s).dump(2) + "\n");
      auto snap = snapshot(sub);
      snap["options"]["checkpoint"] = loop.checkpoint;
      snap["config_hash"] = config_hash(cfg, p);
      write_snapshot(output, snap);
      out << to_text(s);
      return kExitOk;
    }

    if (sub == filter) {
      const auto records = read_records_file(record_file(input));
      const auto part = filter_records(records, filter_tau);
      std::ostringstream kept, dropped;
      write_records(std::span<const AnyRecord>(part.kept), kept);
      write_records(std::span<const AnyRecord>(part.dropped), dropped);
      write_file_atomic(path_in(output, "kept.jsonl"), kept.str());
      write_file_atomic(path_in(output, "dropped.jsonl"), dropped.str());
      write_snapshot(output, snapshot(sub));
      std::vector<double> scores;
      for (const auto& r : records) scores.push_back(*record_score(r));
      out << "kept " << part.kept.size() << ", dropped " << part.dropped.size() << " at tau "
          << filter_tau << "\n";
      for (const auto& [tau, ratio] : acceptance_by_tau(scores)) {
        out << "  tau " << tau_key(tau) << "\t" << ratio << "\n";
      }
      return kExitOk;
    }

    if (sub == stats) {
      std::vector<std::string> concept_texts;
      const Summary s = summarize_input(input, &concept_texts);
      auto j = to_json(s);
      std::vector<std::pair<std::string, double>> hyper;
      if (!taxonomy.empty()) {
        std::vector<std::string> chosen;
        for (const auto& [c, n] : most_frequent(concept_texts, top_concepts)) chosen.push_back(c);
        hyper = hypernym_distribution(chosen, load_taxonomy_file(taxonomy), top_hypernyms);
        j["hypernyms"] = nlohmann::ordered_json::array();
        for (const auto& [h, m] : hyper) j["hypernyms"].push_back({{"hypernym", h}, {"mass", m}});
      }
      if (stats_json) {
        out << j.dump(2) << "\n";
      } else {
        out << to_text(s);
        if (!hyper.empty()) {
          out << "\nhypernym            mass\n";
          for (const auto& [h, m] : hyper) out << h << "\t" << m << "\n";
        }
      }
      if (!output.empty()) {
        write_file_atomic(path_in(output, "stats.json"), j.dump(2) + "\n");
        write_snapshot(output, snapshot(sub));
      }
      return kExitOk;
    }

    if (sub == synth_disc) {
      DiscResult res;
      if (disc_task == "event") {
        std::vector<ConceptRecord> concepts;
        std::vector<InstantiationRecord> ignored;
        split_records(read_records_file(record_file(input)), concepts, ignored);
        res = synth_event_disc(concepts, synth_seed);
      } else {
        res = synth_triple_disc(load_triples(input, "concept", err), synth_seed);
      }
      write_file_atomic(path_in(output, "pairs.jsonl"), jsonl_text(res.pairs));
      write_file_atomic(path_in(output, "skipped.jsonl"), jsonl_text(res.skipped));
      write_snapshot(output, snapshot(sub));
      out << res.pairs.size() << " pairs, " << res.skipped.size() << " skipped\n";
      return kExitOk;
    }

    if (sub == synth_comet) {
      const auto lines = synth_comet_lines(load_triples(input, triple_kind, err));
      write_file_atomic(path_in(output, "comet.jsonl"), jsonl_text(lines));
      write_snapshot(output, snapshot(sub));
      out << lines.size() << " lines\n";
      return kExitOk;
    }

    if (sub == synth_qa) {
      auto triples = load_triples(input, triple_kind, err);
      if (sample > 0) triples = sample_triples(triples, sample, synth_seed, stratify);
      const auto res = synth_qa_pairs(triples, {option_count, synth_seed, stratify});
      write_file_atomic(path_in(output, "qa.jsonl"), jsonl_text(res.items));
      write_file_atomic(path_in(output, "skipped.jsonl"), jsonl_text(res.skipped));
      write_snapshot(output, snapshot(sub));
      out << res.items.size() << " items, " << res.skipped.size() << " skipped\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitUsage;
}

}  // namespace cskd::cli

#include <doctest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cskd/cli/cli.hpp"
#include "cskd/core/fileio.hpp"
#include "cskd/distill/store.hpp"
#include "cskd/metrics/summary.hpp"

using namespace cskd;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cskd-cli-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p.string();
}

const std::string kData = CSKD_DATA_DIR;
const std::string kMini = kData + "/mini_cskb.tsv";

}  // namespace

TEST_CASE("distill is reproducible") {
  const auto a = scratch("a"), b = scratch("b");
  const std::vector<std::string> common = {"--input", kMini, "--rounds", "1", "--tau", "0.9",
                                           "--backend", "mock", "--seed", "7"};
  auto args_a = std::vector<std::string>{"distill", "--out", a};
  args_a.insert(args_a.end(), common.begin(), common.end());
  auto args_b = std::vector<std::string>{"distill", "--out", b};
  args_b.insert(args_b.end(), common.begin(), common.end());
  const auto ra = run_cli(args_a);
  REQUIRE(ra.code == 0);
  REQUIRE(run_cli(args_b).code == 0);
  CHECK(read_file(a + "/records.jsonl") == read_file(b + "/records.jsonl"));
  CHECK(read_file(a + "/stats.json") == read_file(b + "/stats.json"));
  CHECK_FALSE(read_file(a + "/records.jsonl").empty());

  const auto snap = nlohmann::json::parse(read_file(a + "/config.json"));
  CHECK(snap["command"] == "distill");
  CHECK(snap["options"]["tau"] == "0.9");
  CHECK(snap["options"]["nc"] == "20");
  CHECK(snap["options"]["rounds"] == "1");
  CHECK(snap["options"]["seed"] == "7");
  CHECK(snap.contains("config_hash"));

  SUBCASE("stats on the store matches summarize") {
    const auto st = run_cli({"stats", "--input", a, "--json"});
    REQUIRE(st.code == 0);
    const auto cp = load_checkpoint(a + "/checkpoint");
    CHECK(nlohmann::json::parse(st.out) == nlohmann::json::parse(to_json(summarize(cp.store)).dump()));
    const auto from_file = run_cli({"stats", "--input", a + "/records.jsonl", "--json"});
    REQUIRE(from_file.code == 0);
    const auto j = nlohmann::json::parse(from_file.out);
    CHECK(j["conceptualization"] == nlohmann::json::parse(st.out)["conceptualization"]);
    const auto text = run_cli({"stats", "--input", a});
    CHECK(text.out.find("conceptualizations") != std::string::npos);
    const auto tax = run_cli({"stats", "--input", a, "--taxonomy", kData + "/taxonomy_sample.tsv",
                              "--json", "--top", "3"});
    REQUIRE(tax.code == 0);
    CHECK(nlohmann::json::parse(tax.out)["hypernyms"].size() == 3);
  }
  SUBCASE("rerun into the same directory resumes as a no-op") {
    REQUIRE(run_cli(args_a).code == 0);
    CHECK(read_file(a + "/records.jsonl") == read_file(b + "/records.jsonl"));
  }
  SUBCASE("changing the config against an existing checkpoint is fatal") {
    auto changed = args_a;
    changed.push_back("--nc");
    changed.push_back("5");
    const auto r = run_cli(changed);
    CHECK(r.code == 1);
    CHECK(r.err.find("different configuration") != std::string::npos);
  }
  SUBCASE("filter and synthesis consume the store") {
    const auto f = scratch("f");
    REQUIRE(run_cli({"filter", "--input", a + "/records.jsonl", "--tau", "0.95", "--out", f}).code == 0);
    CHECK(fs::exists(f + "/kept.jsonl"));
    CHECK(fs::exists(f + "/config.json"));
    REQUIRE(run_cli({"synth-disc", "--input", a + "/records.jsonl", "--out", f, "--seed", "3"}).code == 0);
    CHECK_FALSE(read_file(f + "/pairs.jsonl").empty());
    REQUIRE(run_cli({"synth-disc", "--input", a + "/records.jsonl", "--out", f, "--task", "triple"}).code == 0);
    REQUIRE(run_cli({"synth-comet", "--input", a + "/records.jsonl", "--out", f}).code == 0);
    CHECK(read_file(f + "/comet.jsonl").find("\"source\":") != std::string::npos);
    REQUIRE(run_cli({"synth-qa", "--input", a + "/records.jsonl", "--out", f, "--options", "4"}).code == 0);
    const std::string qa = read_file(f + "/qa.jsonl");
    const auto first = nlohmann::json::parse(qa.substr(0, qa.find('\n')));
    CHECK(first["options"].size() == 4);
    fs::remove_all(f);
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("stage subcommands") {
  const auto d = scratch("stages");
  REQUIRE(run_cli({"conceptualize", "--input", kMini, "--out", d + "/c", "--nc", "5"}).code == 0);
  CHECK(fs::exists(d + "/c/concepts.jsonl"));
  const auto r = run_cli({"instantiate", "--input", d + "/c/concepts.jsonl", "--out", d + "/i"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(d + "/i/instantiations.jsonl"));
  CHECK(fs::exists(d + "/i/stats.json"));
  fs::remove_all(d);
}

TEST_CASE("ingest") {
  const auto d = scratch("ingest");
  fs::create_directories(d);
  write_file_atomic(d + "/in.tsv",
                    "PersonX arrives at the bar\txWant\tto relax\n"
                    "PersonX sings\txFoo\tloud\n");
  const auto r = run_cli({"ingest", "--input", d + "/in.tsv", "--out", d + "/out"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1 triples") != std::string::npos);
  CHECK(r.err.find(":2:") != std::string::npos);
  CHECK(read_file(d + "/out/errors.jsonl").find("\"line\":2") != std::string::npos);
  CHECK(read_file(d + "/out/triples.jsonl").find("to relax") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("usage and fatal errors") {
  const auto d = scratch("usage");
  auto r = run_cli({"distill", "--input", kMini, "--out", d, "--tau", "1.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--tau") != std::string::npos);
  r = run_cli({"distill", "--input", kMini, "--out", d, "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"distill", "--out", d}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"stats", "--input", d + "/missing.jsonl"}).code == 1);
  r = run_cli({"distill", "--input", kMini, "--out", d, "--backend", "remote"});
  CHECK(r.code == 1);
  CHECK(r.err.find("--endpoint") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("record commands accept a distill directory") {
  const auto d = scratch("dir");
  REQUIRE(run_cli({"distill", "--input", kMini, "--out", d, "--seed", "3"}).code == 0);
  const auto qa_dir = scratch("dir-qa"), qa_file = scratch("file-qa");
  REQUIRE(run_cli({"synth-qa", "--input", d, "--out", qa_dir, "--seed", "1"}).code == 0);
  REQUIRE(run_cli({"synth-qa", "--input", d + "/records.jsonl", "--out", qa_file, "--seed", "1"})
              .code == 0);
  CHECK(read_file(qa_dir + "/qa.jsonl") == read_file(qa_file + "/qa.jsonl"));
  CHECK_FALSE(read_file(qa_dir + "/qa.jsonl").empty());
  CHECK(run_cli({"filter", "--input", d, "--out", scratch("dir-f"), "--tau", "0.95"}).code == 0);
  CHECK(run_cli({"synth-disc", "--input", d, "--out", scratch("dir-d")}).code == 0);
  const auto r = run_cli({"filter", "--input", qa_dir + "/..", "--out", scratch("dir-x")});
  CHECK(r.code == 1);
  CHECK(r.err.find("records.jsonl") != std::string::npos);
  for (const auto& p : {d, qa_dir, qa_file, scratch("dir-f"), scratch("dir-d"), scratch("dir-x")})
    fs::remove_all(p);
}

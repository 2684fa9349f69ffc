#include "cskd/critic/critic.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include <json.hpp>

#include "cskd/core/hash.hpp"
#include "cskd/core/templates.hpp"
#include "cskd/core/text.hpp"

using cskd::text::collapse_whitespace;
using cskd::text::split_whitespace;
using cskd::text::to_lower;
using cskd::text::trim;

namespace cskd {

namespace {

void require_text(std::string_view s, const char* what) {
  if (trim(s).empty()) throw Error(std::string(what) + " must be non-empty");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::size_t word_count(std::string_view s) { return split_whitespace(s).size(); }

double check_range(double s) {
  if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
    throw CriticError("critic returned score outside [0,1]: " + std::to_string(s));
  }
  return s;
}

std::string join_path(const std::string& base, const std::string& leaf) {
  std::string p = base;
  while (!p.empty() && p.back() == '/') p.pop_back();
  return p + leaf;
}

}  // namespace

double Critic::score_conceptualization(std::string_view head,
                                       std::string_view instance,
                                       std::string_view concept_text) const {
  require_text(head, "head");
  require_text(instance, "instance");
  require_text(concept_text, "concept");
  return check_range(do_score_conceptualization(
      conceptualization_statement(head, instance, concept_text), instance,
      concept_text));
}

double Critic::score_statement(std::string_view statement) const {
  require_text(statement, "statement");
  return check_range(do_score_statement(std::string(statement)));
}

std::vector<double> Critic::score_statements(
    const std::vector<std::string>& statements) const {
  for (const auto& s : statements) require_text(s, "statement");
  if (statements.empty()) return {};
  auto out = do_score_statements(statements);
  if (out.size() != statements.size()) {
    throw CriticError("critic returned " + std::to_string(out.size()) +
                      " scores for " + std::to_string(statements.size()) +
                      " statements");
  }
  for (double s : out) check_range(s);
  return out;
}

double Critic::do_score_conceptualization(const std::string& statement,
                                          std::string_view,
                                          std::string_view) const {
  return do_score_statement(statement);
}

std::vector<double> Critic::do_score_statements(
    const std::vector<std::string>& statements) const {
  std::vector<double> out;
  out.reserve(statements.size());
  for (const auto& s : statements) out.push_back(do_score_statement(s));
  return out;
}

// --- heuristic ---

double trigram_overlap(std::string_view concept_text, std::string_view instance) {
  auto grams = [](std::string_view s) {
    const std::string t = to_lower(collapse_whitespace(s));
    std::set<std::string> g;
    for (std::size_t i = 0; i + 3 <= t.size(); ++i) g.insert(t.substr(i, 3));
    return g;
  };
  const auto c = grams(concept_text);
  if (c.empty()) return 0.0;
  const auto i = grams(instance);
  std::size_t hit = 0;
  for (const auto& g : c) hit += i.count(g);
  return static_cast<double>(hit) / static_cast<double>(c.size());
}

std::string HeuristicCritic::id() const {
  return "heuristic:" + std::to_string(seed_);
}

double HeuristicCritic::do_score_conceptualization(
    const std::string& statement, std::string_view instance,
    std::string_view concept_text) const {
  const double noise =
      unit_interval(hash_combine(mix64(seed_ ^ 0xc0ULL), fnv1a64(statement)));
  const double len = static_cast<double>(word_count(concept_text));
  const double logit = 2.5 + 3.0 * (noise - 0.5) -
                       2.0 * trigram_overlap(concept_text, instance) -
                       0.5 * std::max(0.0, len - 3.0);
  return sigmoid(logit);
}

double HeuristicCritic::do_score_statement(const std::string& statement) const {
  const double noise =
      unit_interval(hash_combine(mix64(seed_ ^ 0x5eULL), fnv1a64(statement)));
  const double len = static_cast<double>(word_count(statement));
  const double logit = 3.0 + 3.0 * (noise - 0.5) - 0.15 * std::max(0.0, len - 14.0);
  return sigmoid(logit);
}

// --- remote ---

RemoteCritic::RemoteCritic(Options options) : options_(std::move(options)) {
  if (!options_.sleep) options_.sleep = real_sleeper();
  if (options_.retry.max_attempts < 1) throw Error("retry.max_attempts must be >= 1");
}

std::string RemoteCritic::id() const { return "remote:" + options_.base.url(); }

std::string RemoteCritic::post_with_retry(const std::string& path,
                                          const std::string& body) const {
  Headers headers;
  if (!options_.auth_token.empty()) {
    headers.emplace_back("Authorization", "Bearer " + options_.auth_token);
  }
  std::string last;
  for (int attempt = 0; attempt < options_.retry.max_attempts; ++attempt) {
    if (attempt > 0) options_.sleep(options_.retry.delay_for(attempt - 1));
    const HttpResponse res =
        post_json(options_.base, path, body, headers, options_.timeout);
    if (res.status >= 200 && res.status < 300) return res.body;
    last = res.status == 0 ? "transport error: " + res.error
                           : "HTTP " + std::to_string(res.status);
    if (!is_retryable_status(res.status)) {
      throw CriticError("scoring request to " + path + " failed: " + last);
    }
  }
  throw CriticError("scoring request to " + path + " failed after " +
                    std::to_string(options_.retry.max_attempts) +
                    " attempts: " + last);
}

double RemoteCritic::parse_score(const std::string& body) {
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& s = j.at("score");
    if (!s.is_number()) throw CriticError("'score' is not a number");
    return check_range(s.get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw CriticError(std::string("malformed score response: ") + e.what());
  }
}

std::vector<double> RemoteCritic::parse_scores(const std::string& body,
                                               std::size_t expected) {
  std::vector<double> out;
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& arr = j.at("scores");
    if (!arr.is_array()) throw CriticError("'scores' is not an array");
    for (const auto& s : arr) {
      if (!s.is_number()) throw CriticError("non-numeric entry in 'scores'");
      out.push_back(check_range(s.get<double>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw CriticError(std::string("malformed score_batch response: ") + e.what());
  }
  if (out.size() != expected) {
    throw CriticError("score_batch returned " + std::to_string(out.size()) +
                      " scores, expected " + std::to_string(expected));
  }
  return out;
}

double RemoteCritic::do_score_statement(const std::string& statement) const {
  const nlohmann::json req = {{"statement", statement}};
  return parse_score(
      post_with_retry(join_path(options_.base.path, "/score"), req.dump()));
}

std::vector<double> RemoteCritic::do_score_statements(
    const std::vector<std::string>& statements) const {
  const nlohmann::json req = {{"statements", statements}};
  return parse_scores(
      post_with_retry(join_path(options_.base.path, "/score_batch"), req.dump()),
      statements.size());
}

std::shared_ptr<Critic> make_critic(const CriticSpec& spec, RetryPolicy retry,
                                    Sleeper sleep) {
  if (const auto* h = std::get_if<HeuristicSpec>(&spec)) {
    return std::make_shared<HeuristicCritic>(h->seed);
  }
  const auto& r = std::get<RemoteScorerSpec>(spec);
  if (trim(r.endpoint).empty()) throw Error("remote critic requires an endpoint");
  RemoteCritic::Options o;
  o.base = parse_endpoint(r.endpoint);
  o.timeout = r.timeout;
  o.retry = retry;
  o.sleep = std::move(sleep);
  if (!r.auth_env_var.empty()) {
    if (const char* token = std::getenv(r.auth_env_var.c_str())) o.auth_token = token;
  }
  return std::make_shared<RemoteCritic>(std::move(o));
}

}  // namespace cskd

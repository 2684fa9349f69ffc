#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cskd/core/error.hpp"
#include "cskd/gateway/http.hpp"
#include "cskd/gateway/retry.hpp"

namespace cskd {

// Scoring failed: server unreachable after retries, a permanent HTTP error,
// or a response that breaks the protocol (bad JSON, score outside [0,1]).
class CriticError : public Error {
 public:
  using Error::Error;
};

// Scorers are shared across worker threads; implementations must be
// reentrant.
class Critic {
 public:
  virtual ~Critic() = default;

  virtual std::string id() const = 0;

  // Scores "<head>. <Instance> is a <concept>." Throws cskd::Error on empty
  // input, CriticError on scoring failure.
  double score_conceptualization(std::string_view head,
                                 std::string_view instance,
                                 std::string_view concept_text) const;

  double score_statement(std::string_view statement) const;

  // One score per statement, same order.
  std::vector<double> score_statements(
      const std::vector<std::string>& statements) const;

 protected:
  virtual double do_score_conceptualization(const std::string& statement,
                                            std::string_view instance,
                                            std::string_view concept_text) const;
  virtual double do_score_statement(const std::string& statement) const = 0;
  virtual std::vector<double> do_score_statements(
      const std::vector<std::string>& statements) const;
};

// Offline critic: sigmoid of a hash-noise term minus penalties for long
// candidates and for concepts that copy the instance's characters.
class HeuristicCritic final : public Critic {
 public:
  explicit HeuristicCritic(std::uint64_t seed) : seed_(seed) {}
  std::string id() const override;

 protected:
  double do_score_conceptualization(const std::string& statement,
                                    std::string_view instance,
                                    std::string_view concept_text) const override;
  double do_score_statement(const std::string& statement) const override;

 private:
  std::uint64_t seed_;
};

// Fraction of the concept's character trigrams (lowercased) that also occur
// in the instance. 0 when the concept has no trigram.
double trigram_overlap(std::string_view concept_text, std::string_view instance);

// Client for POST <base>/score and <base>/score_batch.
class RemoteCritic final : public Critic {
 public:
  struct Options {
    Endpoint base;
    std::string auth_token;
    std::chrono::milliseconds timeout{30'000};
    RetryPolicy retry;
    Sleeper sleep;  // defaults to real_sleeper()
  };

  explicit RemoteCritic(Options options);
  std::string id() const override;

  // Exposed for tests.
  static double parse_score(const std::string& body);
  static std::vector<double> parse_scores(const std::string& body,
                                          std::size_t expected);

 protected:
  double do_score_statement(const std::string& statement) const override;
  std::vector<double> do_score_statements(
      const std::vector<std::string>& statements) const override;

 private:
  std::string post_with_retry(const std::string& path,
                              const std::string& body) const;

  Options options_;
};

struct HeuristicSpec {
  std::uint64_t seed = 0;
};

struct RemoteScorerSpec {
  std::string endpoint;
  std::string auth_env_var = "CSKD_API_KEY";
  std::chrono::milliseconds timeout{30'000};
};

using CriticSpec = std::variant<HeuristicSpec, RemoteScorerSpec>;

std::shared_ptr<Critic> make_critic(const CriticSpec& spec,
                                    RetryPolicy retry = {}, Sleeper sleep = {});

}  // namespace cskd

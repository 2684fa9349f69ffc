#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cskd/core/error.hpp"
#include "cskd/core/records.hpp"
#include "cskd/critic/critic.hpp"

namespace cskd {

inline constexpr double kDefaultTau = 0.9;
inline constexpr std::array<double, 4> kTauGrid = {0.0, 0.5, 0.7, 0.9};

struct FilterConfig {
  double tau = kDefaultTau;
  CriticSpec critic = HeuristicSpec{};

  // Throws cskd::Error unless 0 <= tau <= 1.
  void validate() const;
};

void check_tau(double tau);

inline const std::optional<double>& record_score(const ConceptRecord& r) {
  return r.score;
}
inline const std::optional<double>& record_score(const InstantiationRecord& r) {
  return r.score;
}
const std::optional<double>& record_score(const AnyRecord& r);
std::string record_id(const AnyRecord& r);

template <class R>
struct Partition {
  std::vector<R> kept;
  std::vector<R> dropped;
};

// kept = records with score >= tau, dropped = the rest, order preserved.
// Throws cskd::Error on an unscored record or tau outside [0,1].
template <class R>
Partition<R> filter_records(std::span<const R> records, double tau) {
  check_tau(tau);
  Partition<R> out;
  for (const R& r : records) {
    const auto& s = record_score(r);
    if (!s) throw Error("filter_records: unscored record");
    (*s >= tau ? out.kept : out.dropped).push_back(r);
  }
  return out;
}

template <class R>
Partition<R> filter_records(const std::vector<R>& records, double tau) {
  return filter_records(std::span<const R>(records), tau);
}

// Fraction of scores >= tau for each tau in the grid; 0 for no scores.
std::map<double, double> acceptance_by_tau(
    std::span<const double> scores,
    std::span<const double> grid = std::span<const double>(kTauGrid));

// Stable key for JSON output: 0 -> "0", 0.5 -> "0.5".
std::string tau_key(double tau);

}  // namespace cskd

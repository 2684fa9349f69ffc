#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace cskd {

// Decoding configuration for one generation request.
struct GenParams {
  double temperature = 1.0;
  int max_new_tokens = 200;
  std::optional<int> top_k;  // nullopt = top-k sampling off
  int num_samples = 1;
  std::uint64_t seed = 0;    // honoured by the mock backend only

  // temperature 1.0, 200 tokens, 20 samples per event.
  static GenParams conceptualization_profile();
  // top-k 10, 200 tokens, one instantiation per concept.
  static GenParams instantiation_profile();

  // Empty string when valid, else a description of the first violation.
  std::string validation_error() const;

  friend bool operator==(const GenParams&, const GenParams&) = default;
};

inline constexpr int kDefaultConceptSamples = 20;
inline constexpr int kDefaultTopK = 10;

}  // namespace cskd

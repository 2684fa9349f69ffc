#include "cskd/gateway/gen_params.hpp"

namespace cskd {

GenParams GenParams::conceptualization_profile() {
  GenParams p;
  p.temperature = 1.0;
  p.max_new_tokens = 200;
  p.num_samples = kDefaultConceptSamples;
  return p;
}

GenParams GenParams::instantiation_profile() {
  GenParams p;
  p.temperature = 1.0;
  p.max_new_tokens = 200;
  p.top_k = kDefaultTopK;
  p.num_samples = 1;
  return p;
}

std::string GenParams::validation_error() const {
  if (!(temperature >= 0.0)) return "temperature must be non-negative";
  if (max_new_tokens < 1) return "max_new_tokens must be positive";
  if (top_k && *top_k < 1) return "top_k must be positive";
  if (num_samples < 1) return "num_samples must be positive";
  return "";
}

}  // namespace cskd

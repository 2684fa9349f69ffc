#include "cskd/critic/filter.hpp"

#include <cmath>
#include <sstream>

namespace cskd {

void check_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error("tau must be in [0,1], got " + std::to_string(tau));
  }
}

void FilterConfig::validate() const { check_tau(tau); }

const std::optional<double>& record_score(const AnyRecord& r) {
  return std::visit(
      [](const auto& x) -> const std::optional<double>& { return x.score; }, r);
}

std::string record_id(const AnyRecord& r) {
  return std::visit([](const auto& x) { return x.id; }, r);
}

std::map<double, double> acceptance_by_tau(std::span<const double> scores,
                                           std::span<const double> grid) {
  std::map<double, double> out;
  for (double tau : grid) {
    std::size_t n = 0;
    for (double s : scores) n += s >= tau ? 1 : 0;
    out[tau] = scores.empty() ? 0.0
                              : static_cast<double>(n) /
                                    static_cast<double>(scores.size());
  }
  return out;
}

std::string tau_key(double tau) {
  std::ostringstream os;
  os << tau;
  return os.str();
}

}  // namespace cskd

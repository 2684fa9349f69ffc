#pragma once

#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cskd {

struct Hypernym {
  std::string name;
  double weight = 1.0;
};

// IsA lookup keyed by lowercased, whitespace-collapsed concept text.
class Taxonomy {
 public:
  // Throws cskd::Error on a negative weight or empty names.
  void add(std::string_view concept_text, std::string_view hypernym, double weight = 1.0);

  // nullptr when the concept is not present.
  const std::vector<Hypernym>* find(std::string_view concept_text) const;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<Hypernym>> entries_;
};

// TSV lines "instance<TAB>hypernym[<TAB>weight]"; weight defaults to 1.
// Blank lines and lines starting with '#' are skipped. Throws cskd::Error
// naming the 1-based line of the first malformed row.
Taxonomy load_taxonomy(std::istream& in);
Taxonomy load_taxonomy_file(const std::string& path);

inline constexpr const char* kUnmatchedBucket = "<unmatched>";

// Each concept contributes mass 1, split over its hypernyms in proportion
// to their weights (evenly if all weights are 0). Unmatched concepts go to
// "<unmatched>". Sorted by mass descending, then name. top_n = 0 keeps all.
std::vector<std::pair<std::string, double>> hypernym_distribution(
    const std::vector<std::string>& concepts, const Taxonomy& taxonomy,
    std::size_t top_n = 0);

// Normalized concept texts by frequency, descending, ties by text.
std::vector<std::pair<std::string, std::size_t>> most_frequent(
    const std::vector<std::string>& texts, std::size_t top_n = 0);

}  // namespace cskd

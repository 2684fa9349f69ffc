#include "cskd/metrics/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cskd/core/error.hpp"
#include "cskd/core/text.hpp"

namespace cskd {

using text::normalize_key;

void Taxonomy::add(std::string_view concept_text, std::string_view hypernym, double weight) {
  const std::string key = normalize_key(concept_text);
  const std::string name = text::collapse_whitespace(hypernym);
  if (key.empty() || name.empty()) throw Error("taxonomy entries need a concept and a hypernym");
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw Error("taxonomy weight must be a non-negative number");
  }
  auto& list = entries_[key];
  for (auto& h : list) {
    if (h.name == name) {
      h.weight += weight;
      return;
    }
  }
  list.push_back({name, weight});
}

const std::vector<Hypernym>* Taxonomy::find(std::string_view concept_text) const {
  const auto it = entries_.find(normalize_key(concept_text));
  return it == entries_.end() ? nullptr : &it->second;
}

Taxonomy load_taxonomy(std::istream& in) {
  Taxonomy t;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    try {
      if (fields.size() < 2 || fields.size() > 3) throw Error("expected 2 or 3 fields");
      double w = 1.0;
      if (fields.size() == 3) {
        std::size_t used = 0;
        w = std::stod(fields[2], &used);
        if (used != fields[2].size()) throw Error("bad weight '" + fields[2] + "'");
      }
      t.add(fields[0], fields[1], w);
    } catch (const std::invalid_argument&) {
      throw Error("taxonomy line " + std::to_string(n) + ": bad weight");
    } catch (const std::out_of_range&) {
      throw Error("taxonomy line " + std::to_string(n) + ": bad weight");
    } catch (const Error& e) {
      throw Error("taxonomy line " + std::to_string(n) + ": " + e.what());
    }
  }
  return t;
}

Taxonomy load_taxonomy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_taxonomy(in);
}

namespace {

template <class V>
void rank(std::vector<std::pair<std::string, V>>& v, std::size_t top_n) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (top_n > 0 && v.size() > top_n) v.resize(top_n);
}

}  // namespace

std::vector<std::pair<std::string, double>> hypernym_distribution(
    const std::vector<std::string>& concepts, const Taxonomy& taxonomy, std::size_t top_n) {
  std::map<std::string, double> mass;
  for (const auto& c : concepts) {
    const auto* hs = taxonomy.find(c);
    if (!hs || hs->empty()) {
      mass[kUnmatchedBucket] += 1.0;
      continue;
    }
    double total = 0.0;
    for (const auto& h : *hs) total += h.weight;
    for (const auto& h : *hs) {
      mass[h.name] += total > 0.0 ? h.weight / total : 1.0 / static_cast<double>(hs->size());
    }
  }
  std::vector<std::pair<std::string, double>> out(mass.begin(), mass.end());
  rank(out, top_n);
  return out;
}

std::vector<std::pair<std::string, std::size_t>> most_frequent(
    const std::vector<std::string>& texts, std::size_t top_n) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : texts) ++counts[normalize_key(t)];
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  rank(out, top_n);
  return out;
}

}  // namespace cskd

// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Attribute-level uncertainty over a candidate set: value distributions,
// Shannon entropy in bits, cardinality-normalized entropy, and the two
// argmax-entropy selections (next question, grid partition dimension).

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "idss/catalog.hpp"

namespace idss {

struct ValueDistribution {
  std::string dimension;
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;  // candidates that have a value on this dimension

  std::size_t distinct() const { return counts.size(); }

  // (value, count) by descending count, ties by value.
  std::vector<std::pair<std::string, std::size_t>> by_share() const {
    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
  }
};

// Continuous dimensions are counted per equal-frequency bin (bin label as the
// value); missing values are left out of both counts and total.
inline ValueDistribution value_distribution(const Catalog& catalog, std::span<const std::size_t> candidates,
                                            std::size_t dim) {
  ValueDistribution out;
  out.dimension = catalog.schema()[dim].name;
  if (candidates.empty()) return out;
  if (catalog.schema()[dim].continuous()) {
    const Binning b = discretize(catalog, dim, candidates);
    for (int bin : b.bin_of) {
      if (bin < 0) continue;
      ++out.counts[b.bins[static_cast<std::size_t>(bin)].label];
      ++out.total;
    }
    return out;
  }
  for (std::size_t c : candidates) {
    if (const auto* s = std::get_if<std::string>(&catalog.value(c, dim))) {
      ++out.counts[*s];
      ++out.total;
    }
  }
  return out;
}

// H = -sum p log2 p, with 0 log 0 = 0.
inline double shannon_entropy(const ValueDistribution& dist) {
  if (dist.total == 0) return 0.0;
  const double n = static_cast<double>(dist.total);
  double h = 0.0;
  for (const auto& [_, count] : dist.counts) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  }
  return h;
}

// H / log2 |Val|; defined as 0 when fewer than two values are observed.
inline double normalized_entropy(const ValueDistribution& dist) {
  std::size_t distinct = 0;
  for (const auto& [_, count] : dist.counts) distinct += count > 0 ? 1 : 0;
  if (distinct < 2) return 0.0;
  return shannon_entropy(dist) / std::log2(static_cast<double>(distinct));
}

struct DimensionEntropy {
  std::string dimension;
  std::size_t index = 0;  // schema position
  double raw_entropy = 0.0;
  double normalized_entropy = 0.0;
  std::size_t distinct_values = 0;
  ValueDistribution distribution;
};

struct EntropyReport {
  std::size_t candidate_count = 0;
  std::vector<DimensionEntropy> dimensions;  // schema order

  const DimensionEntropy* find(const std::string& dim) const {
    for (const auto& d : dimensions) {
      if (d.dimension == dim) return &d;
    }
    return nullptr;
  }
};

inline EntropyReport entropy_report(const Catalog& catalog, std::span<const std::size_t> candidates) {
  EntropyReport report;
  report.candidate_count = candidates.size();
  for (std::size_t d = 0; d < catalog.schema().size(); ++d) {
    DimensionEntropy e;
    e.dimension = catalog.schema()[d].name;
    e.index = d;
    e.distribution = value_distribution(catalog, candidates, d);
    e.raw_entropy = shannon_entropy(e.distribution);
    e.normalized_entropy = normalized_entropy(e.distribution);
    e.distinct_values = e.distribution.distinct();
    report.dimensions.push_back(std::move(e));
  }
  return report;
}

inline json to_json(const EntropyReport& report) {
  json dims = json::array();
  for (const auto& d : report.dimensions) {
    dims.push_back({{"dimension", d.dimension},
                    {"raw_entropy", d.raw_entropy},
                    {"normalized_entropy", d.normalized_entropy},
                    {"distinct_values", d.distinct_values},
                    {"counts", d.distribution.counts},
                    {"total", d.distribution.total}});
  }
  return json{{"candidate_count", report.candidate_count}, {"dimensions", std::move(dims)}};
}

// Which entropy the question threshold is compared against.
enum class EntropyMode { kNormalized, kRaw };

inline double entropy_of(const DimensionEntropy& d, EntropyMode mode) {
  return mode == EntropyMode::kRaw ? d.raw_entropy : d.normalized_entropy;
}

// Argmax-entropy dimension outside specified and asked, or nullopt when none
// reaches `threshold`. Ties go to the earlier schema dimension.
inline std::optional<std::size_t> select_question_dimension(const EntropyReport& report,
                                                            const std::set<std::string>& specified,
                                                            const std::set<std::string>& asked, double threshold,
                                                            EntropyMode mode = EntropyMode::kNormalized) {
  const DimensionEntropy* best = nullptr;
  for (const auto& d : report.dimensions) {
    if (specified.count(d.dimension) || asked.count(d.dimension)) continue;
    if (!best || entropy_of(d, mode) > entropy_of(*best, mode)) best = &d;
  }
  if (!best || entropy_of(*best, mode) < threshold) return std::nullopt;
  return best->index;
}

inline std::optional<std::size_t> select_question_dimension(const Catalog& catalog,
                                                            std::span<const std::size_t> candidates,
                                                            const std::set<std::string>& specified,
                                                            const std::set<std::string>& asked, double threshold,
                                                            EntropyMode mode = EntropyMode::kNormalized) {
  return select_question_dimension(entropy_report(catalog, candidates), specified, asked, threshold, mode);
}

// Argmax normalized entropy over unspecified dimensions of the ranked set;
// nullopt when every such dimension is single-valued.
inline std::optional<std::size_t> select_diversification_dimension(const EntropyReport& ranked_report,
                                                                   const std::set<std::string>& specified) {
  const DimensionEntropy* best = nullptr;
  for (const auto& d : ranked_report.dimensions) {
    if (specified.count(d.dimension)) continue;
    if (!best || d.normalized_entropy > best->normalized_entropy) best = &d;
  }
  if (!best || best->normalized_entropy <= 0.0) return std::nullopt;
  return best->index;
}

inline std::optional<std::size_t> select_diversification_dimension(const Catalog& catalog,
                                                                   std::span<const std::size_t> ranked,
                                                                   const std::set<std::string>& specified) {
  return select_diversification_dimension(entropy_report(catalog, ranked), specified);
}

}  // namespace idss

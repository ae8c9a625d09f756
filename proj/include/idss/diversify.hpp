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

// Grid presentation: the ranked list partitioned along the highest-entropy
// dimension the user has not constrained, one labeled row per partition.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "idss/catalog.hpp"
#include "idss/entropy.hpp"
#include "idss/ranking.hpp"

namespace idss {

struct GridCell {
  std::string id;
  std::size_t selection_rank = 0;
  double score = 0.0;
  std::map<std::string, AttributeValue> attributes;

  bool operator==(const GridCell&) const = default;
};

struct GridRow {
  std::string label;
  std::vector<GridCell> items;

  bool operator==(const GridRow&) const = default;
};

struct Grid {
  std::optional<std::string> dimension;  // nullopt for the flat fallback
  std::vector<GridRow> rows;

  std::size_t item_count() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.items.size();
    return n;
  }
  bool operator==(const Grid&) const = default;
};

inline constexpr const char* kMissingPartitionLabel = "Not listed";

inline GridCell make_cell(const Catalog& catalog, const ScoredCandidate& c) {
  GridCell cell;
  const Item& item = catalog.item(c.item);
  cell.id = item.id;
  cell.selection_rank = c.selection_rank;
  cell.score = c.relevance;
  for (std::size_t d = 0; d < catalog.schema().size(); ++d) cell.attributes[catalog.schema()[d].name] = item.values[d];
  return cell;
}

// Partitions `ranked` by its value on `dimension` (continuous dimensions by
// equal-frequency bin), orders partitions by size descending (then by
// best-ranked member, then by value), and keeps the top `n` of the first `r`.
// Without a dimension the result is one unlabeled row of the top r*n items.
inline Grid bucket_grid(const Catalog& catalog, std::span<const ScoredCandidate> ranked,
                        std::optional<std::size_t> dimension, std::size_t r, std::size_t n) {
  Grid grid;
  if (ranked.empty() || r == 0 || n == 0) return grid;
  if (!dimension) {
    GridRow row;
    for (std::size_t i = 0; i < std::min(ranked.size(), r * n); ++i) row.items.push_back(make_cell(catalog, ranked[i]));
    grid.rows.push_back(std::move(row));
    return grid;
  }

  const auto& attr = catalog.schema()[*dimension];
  grid.dimension = attr.name;

  struct Partition {
    std::string key;    // sort key for the final tie-break
    std::string label;
    std::vector<std::size_t> members;  // positions in `ranked`, ranking order
  };
  std::map<std::string, Partition> parts;

  if (attr.continuous()) {
    std::vector<std::size_t> ids;
    for (const auto& c : ranked) ids.push_back(c.item);
    const Binning b = discretize(catalog, *dimension, ids);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      const int bin = b.bin_of[i];
      // Bin index keeps numeric order under lexicographic compare for k < 10.
      const std::string key = bin < 0 ? "~" : std::to_string(bin);
      auto& p = parts[key];
      p.key = key;
      p.label = bin < 0 ? kMissingPartitionLabel : b.bins[static_cast<std::size_t>(bin)].label;
      p.members.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      const auto* s = std::get_if<std::string>(&catalog.value(ranked[i].item, *dimension));
      const std::string key = s ? *s : "~";
      auto& p = parts[key];
      p.key = key;
      p.label = s ? text::capitalize(*s) : kMissingPartitionLabel;
      p.members.push_back(i);
    }
  }

  std::vector<Partition*> order;
  for (auto& [_, p] : parts) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const Partition* a, const Partition* b) {
    if (a->members.size() != b->members.size()) return a->members.size() > b->members.size();
    if (a->members.front() != b->members.front()) return a->members.front() < b->members.front();
    return a->key < b->key;
  });

  for (std::size_t i = 0; i < std::min(r, order.size()); ++i) {
    GridRow row;
    row.label = order[i]->label;
    for (std::size_t j = 0; j < std::min(n, order[i]->members.size()); ++j) {
      row.items.push_back(make_cell(catalog, ranked[order[i]->members[j]]));
    }
    grid.rows.push_back(std::move(row));
  }
  return grid;
}

// Chooses the partition dimension from the ranked set, then buckets.
inline Grid present(const Catalog& catalog, std::span<const ScoredCandidate> ranked,
                    const std::set<std::string>& specified, std::size_t r = 3, std::size_t n = 3) {
  if (ranked.empty()) return {};
  std::vector<std::size_t> ids;
  for (const auto& c : ranked) ids.push_back(c.item);
  const auto dim = select_diversification_dimension(catalog, ids, specified);
  return bucket_grid(catalog, ranked, dim, r, n);
}

// The list that top-k metrics are computed over: rows in order, items in
// order within each row.
inline std::vector<GridCell> flatten_row_major(const Grid& grid) {
  std::vector<GridCell> out;
  for (const auto& row : grid.rows) out.insert(out.end(), row.items.begin(), row.items.end());
  return out;
}

inline json to_json(const Grid& grid) {
  json rows = json::array();
  for (const auto& row : grid.rows) {
    json items = json::array();
    for (const auto& c : row.items) {
      json attrs = json::object();
      for (const auto& [k, v] : c.attributes) attrs[k] = value_to_json(v);
      items.push_back({{"id", c.id}, {"selection_rank", c.selection_rank}, {"score", c.score}, {"attributes", attrs}});
    }
    rows.push_back({{"label", row.label}, {"items", std::move(items)}});
  }
  return json{{"dimension", grid.dimension ? json(*grid.dimension) : json(nullptr)}, {"rows", std::move(rows)}};
}

inline Grid grid_from_json(const json& j) {
  Grid g;
  if (j.contains("dimension") && !j.at("dimension").is_null()) g.dimension = j.at("dimension").get<std::string>();
  for (const auto& r : j.at("rows")) {
    GridRow row;
    row.label = r.value("label", "");
    for (const auto& it : r.at("items")) {
      GridCell c;
      c.id = it.at("id").get<std::string>();
      c.selection_rank = it.value("selection_rank", std::size_t{0});
      c.score = it.value("score", 0.0);
      if (it.contains("attributes")) {
        for (const auto& [k, v] : it.at("attributes").items()) c.attributes[k] = value_from_json(v);
      }
      row.items.push_back(std::move(c));
    }
    g.rows.push_back(std::move(row));
  }
  return g;
}

}  // namespace idss

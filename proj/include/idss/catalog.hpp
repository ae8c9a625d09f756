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

// Item catalog: attribute schema, CSV loading, hard-filter retrieval,
// progressive relaxation, and equal-frequency discretization of continuous
// attributes.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "idss/error.hpp"
#include "idss/text.hpp"

namespace idss {

using json = nlohmann::json;

enum class AttributeKind { kCategorical, kContinuous };

struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;
  std::string unit;  // empty when unitless
  int relaxation_rank = 0;  // lower is relaxed first
  std::string question_label;
  std::map<std::string, std::string> synonyms;  // lower-case alias -> canonical value

  bool continuous() const { return kind == AttributeKind::kContinuous; }
  const std::string& label() const { return question_label.empty() ? name : question_label; }
};

class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<AttributeSchema> attributes) : attrs_(std::move(attributes)) {
    for (std::size_t i = 0; i < attrs_.size(); ++i) {
      if (attrs_[i].name.empty()) throw SchemaError("attribute with empty name");
      if (!index_.emplace(attrs_[i].name, i).second) {
        throw SchemaError("duplicate attribute '" + attrs_[i].name + "'");
      }
    }
  }

  std::size_t size() const { return attrs_.size(); }
  const AttributeSchema& operator[](std::size_t i) const { return attrs_[i]; }
  const std::vector<AttributeSchema>& attributes() const { return attrs_; }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw SchemaError("unknown dimension '" + std::string(name) + "'");
  }

  // Dimension indices ordered by (relaxation_rank, name).
  std::vector<std::size_t> relaxation_order() const {
    std::vector<std::size_t> order(attrs_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (attrs_[a].relaxation_rank != attrs_[b].relaxation_rank) {
        return attrs_[a].relaxation_rank < attrs_[b].relaxation_rank;
      }
      return attrs_[a].name < attrs_[b].name;
    });
    return order;
  }

 private:
  std::vector<AttributeSchema> attrs_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline std::string to_string(AttributeKind k) {
  return k == AttributeKind::kContinuous ? "continuous" : "categorical";
}

inline Schema schema_from_json(const json& j) {
  const json& list = j.contains("attributes") ? j.at("attributes") : j;
  if (!list.is_array()) throw SchemaError("schema must be an array of attributes");
  std::vector<AttributeSchema> attrs;
  for (const auto& a : list) {
    AttributeSchema s;
    s.name = a.at("name").get<std::string>();
    const std::string kind = a.value("kind", "categorical");
    if (kind == "continuous") {
      s.kind = AttributeKind::kContinuous;
    } else if (kind != "categorical") {
      throw SchemaError("attribute '" + s.name + "' has unknown kind '" + kind + "'");
    }
    s.unit = a.value("unit", "");
    s.relaxation_rank = a.value("relaxation_rank", 0);
    s.question_label = a.value("question_label", s.name);
    if (a.contains("synonyms")) {
      for (const auto& [alias, canon] : a.at("synonyms").items()) {
        s.synonyms[text::lower(alias)] = canon.get<std::string>();
      }
    }
    attrs.push_back(std::move(s));
  }
  return Schema(std::move(attrs));
}

inline json schema_to_json(const Schema& schema) {
  json list = json::array();
  for (const auto& a : schema.attributes()) {
    json e = {{"name", a.name},
              {"kind", to_string(a.kind)},
              {"relaxation_rank", a.relaxation_rank},
              {"question_label", a.question_label}};
    if (!a.unit.empty()) e["unit"] = a.unit;
    if (!a.synonyms.empty()) e["synonyms"] = a.synonyms;
    list.push_back(std::move(e));
  }
  return json{{"attributes", std::move(list)}};
}

// Missing (monostate), categorical token, or continuous magnitude with the
// schema's unit stripped.
using AttributeValue = std::variant<std::monostate, std::string, double>;

inline bool is_missing(const AttributeValue& v) { return std::holds_alternative<std::monostate>(v); }

inline json value_to_json(const AttributeValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return nullptr;
}

inline AttributeValue value_from_json(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.get<double>();
  return std::monostate{};
}

struct Item {
  std::string id;
  std::vector<AttributeValue> values;  // indexed by schema position
  std::string description;
  std::vector<std::string> pros;
  std::vector<std::string> cons;
};

// ---------------------------------------------------------------------------
// Predicates and filter sets

struct Equals {
  std::string value;
  bool operator==(const Equals&) const = default;
};

struct OneOf {
  std::set<std::string> values;
  bool operator==(const OneOf&) const = default;
};

// Closed interval; either end may be open.
struct Range {
  std::optional<double> lo;
  std::optional<double> hi;
  bool operator==(const Range&) const = default;
};

using Predicate = std::variant<Equals, OneOf, Range>;

// A missing value never satisfies a predicate.
inline bool matches(const Predicate& p, const AttributeValue& v) {
  if (is_missing(v)) return false;
  if (const auto* eq = std::get_if<Equals>(&p)) {
    const auto* s = std::get_if<std::string>(&v);
    return s && *s == eq->value;
  }
  if (const auto* in = std::get_if<OneOf>(&p)) {
    const auto* s = std::get_if<std::string>(&v);
    return s && in->values.count(*s) > 0;
  }
  const auto& r = std::get<Range>(p);
  const auto* d = std::get_if<double>(&v);
  if (!d) return false;
  if (r.lo && *d < *r.lo) return false;
  if (r.hi && *d > *r.hi) return false;
  return true;
}

struct FilterSet {
  std::map<std::string, Predicate> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  bool contains(const std::string& dim) const { return entries.count(dim) > 0; }
  void set(std::string dim, Predicate p) { entries.insert_or_assign(std::move(dim), std::move(p)); }
  std::set<std::string> dimensions() const {
    std::set<std::string> out;
    for (const auto& [d, _] : entries) out.insert(d);
    return out;
  }
  bool operator==(const FilterSet&) const = default;
};

inline void validate_filters(const Schema& schema, const FilterSet& filters) {
  for (const auto& [dim, pred] : filters.entries) {
    const auto idx = schema.find(dim);
    if (!idx) throw SchemaError("filter on unknown dimension '" + dim + "'");
    const bool continuous = schema[*idx].continuous();
    const bool is_range = std::holds_alternative<Range>(pred);
    if (continuous && !is_range) {
      throw SchemaError("dimension '" + dim + "' is continuous; only range predicates apply");
    }
    if (!continuous && is_range) {
      throw SchemaError("dimension '" + dim + "' is categorical; range predicates do not apply");
    }
    if (const auto* in = std::get_if<OneOf>(&pred); in && in->values.empty()) {
      throw SchemaError("one_of predicate on '" + dim + "' is empty");
    }
  }
}

inline json predicate_to_json(const Predicate& p) {
  if (const auto* eq = std::get_if<Equals>(&p)) return json{{"equals", eq->value}};
  if (const auto* in = std::get_if<OneOf>(&p)) return json{{"one_of", in->values}};
  const auto& r = std::get<Range>(p);
  json range = {{"lo", nullptr}, {"hi", nullptr}};
  if (r.lo) range["lo"] = *r.lo;
  if (r.hi) range["hi"] = *r.hi;
  return json{{"range", range}};
}

inline Predicate predicate_from_json(const json& j) {
  if (j.contains("equals")) return Equals{j.at("equals").get<std::string>()};
  if (j.contains("one_of")) return OneOf{j.at("one_of").get<std::set<std::string>>()};
  if (j.contains("range")) {
    const json& r = j.at("range");
    Range out;
    if (r.contains("lo") && !r.at("lo").is_null()) out.lo = r.at("lo").get<double>();
    if (r.contains("hi") && !r.at("hi").is_null()) out.hi = r.at("hi").get<double>();
    return out;
  }
  throw SchemaError("predicate must be one of equals / one_of / range: " + j.dump());
}

inline json filters_to_json(const FilterSet& f) {
  json out = json::object();
  for (const auto& [dim, pred] : f.entries) out[dim] = predicate_to_json(pred);
  return out;
}

inline FilterSet filters_from_json(const json& j) {
  FilterSet out;
  if (j.is_null()) return out;
  for (const auto& [dim, pred] : j.items()) out.set(dim, predicate_from_json(pred));
  return out;
}

// ---------------------------------------------------------------------------
// Catalog

class Catalog {
 public:
  Catalog() = default;
  Catalog(Schema schema, std::vector<Item> items) : schema_(std::move(schema)), items_(std::move(items)) {
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].values.size() != schema_.size()) {
        throw SchemaError("item '" + items_[i].id + "' does not cover every schema dimension");
      }
      if (!by_id_.emplace(items_[i].id, i).second) {
        throw SchemaError("duplicate item id '" + items_[i].id + "'");
      }
    }
    vocab_.resize(schema_.size());
    for (std::size_t d = 0; d < schema_.size(); ++d) {
      if (schema_[d].continuous()) continue;
      std::set<std::string> seen;
      for (const auto& item : items_) {
        if (const auto* s = std::get_if<std::string>(&item.values[d])) seen.insert(*s);
      }
      vocab_[d].assign(seen.begin(), seen.end());
    }
  }

  const Schema& schema() const { return schema_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Item& item(std::size_t i) const { return items_.at(i); }
  std::span<const Item> items() const { return items_; }
  const AttributeValue& value(std::size_t item, std::size_t dim) const { return items_[item].values[dim]; }

  std::optional<std::size_t> find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

  // Distinct observed values of a categorical dimension, sorted.
  const std::vector<std::string>& vocabulary(std::size_t dim) const { return vocab_.at(dim); }

  std::vector<std::size_t> all_indices() const {
    std::vector<std::size_t> out(items_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }

 private:
  Schema schema_;
  std::vector<Item> items_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::vector<std::string>> vocab_;
};

namespace detail {

// RFC 4180 records: quoted fields, doubled quotes, embedded newlines.
inline std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  char c;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      if (in.peek() == '\n') continue;
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

inline bool is_missing_marker(std::string_view s) {
  const std::string l = text::lower(text::trim(s));
  return l.empty() || l == "na" || l == "n/a" || l == "null";
}

// "$25,000" -> 25000, "42000 miles" -> 42000, "30k" -> 30000.
inline std::optional<double> parse_quantity(std::string_view raw) {
  std::string s;
  for (char c : text::trim(raw)) {
    if (c == '$' || c == ',' || c == ' ') continue;
    s.push_back(c);
  }
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr == first) return std::nullopt;
  std::string_view rest(ptr, static_cast<std::size_t>(last - ptr));
  if (rest == "k" || rest == "K") return v * 1000.0;
  for (char c : rest) {
    if (!text::is_alpha(c)) return std::nullopt;
  }
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::vector<std::string> split_phrases(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& part : text::split(s, '|')) {
    auto t = text::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace detail

// Reads a comma-delimited catalog whose header is "id", every schema
// dimension, and optionally "description", "pros", "cons". Pros and cons hold
// "|"-separated phrases.
inline Catalog load_catalog(std::istream& in, const Schema& schema) {
  auto rows = detail::read_csv(in);
  if (rows.empty()) throw SchemaError("catalog has no header row");
  const auto& header = rows.front();

  std::optional<std::size_t> id_col, desc_col, pros_col, cons_col;
  std::vector<std::optional<std::size_t>> dim_col(schema.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(text::trim(header[c]));
    if (name == "id") {
      id_col = c;
    } else if (name == "description") {
      desc_col = c;
    } else if (name == "pros") {
      pros_col = c;
    } else if (name == "cons") {
      cons_col = c;
    } else if (auto d = schema.find(name)) {
      dim_col[*d] = c;
    } else {
      throw SchemaError("unknown column '" + name + "'");
    }
  }
  if (!id_col) throw SchemaError("catalog is missing the 'id' column");
  for (std::size_t d = 0; d < schema.size(); ++d) {
    if (!dim_col[d]) throw SchemaError("catalog is missing column '" + schema[d].name + "'");
  }

  std::vector<Item> items;
  items.reserve(rows.size() - 1);
  std::set<std::string> seen_ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw LoadError(r, "*", "expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(row.size()));
    }
    Item item;
    item.id = std::string(text::trim(row[*id_col]));
    if (item.id.empty()) throw LoadError(r, "id", "empty id");
    if (!seen_ids.insert(item.id).second) throw LoadError(r, "id", "duplicate id '" + item.id + "'");
    item.values.resize(schema.size());
    for (std::size_t d = 0; d < schema.size(); ++d) {
      const std::string& cell = row[*dim_col[d]];
      if (detail::is_missing_marker(cell)) continue;
      if (schema[d].continuous()) {
        auto q = detail::parse_quantity(cell);
        if (!q) throw LoadError(r, schema[d].name, "cannot parse '" + cell + "' as a number");
        item.values[d] = *q;
      } else {
        item.values[d] = std::string(text::trim(cell));
      }
    }
    if (desc_col) item.description = row[*desc_col];
    if (pros_col) item.pros = detail::split_phrases(row[*pros_col]);
    if (cons_col) item.cons = detail::split_phrases(row[*cons_col]);
    items.push_back(std::move(item));
  }
  return Catalog(schema, std::move(items));
}

inline Schema load_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open schema file '" + path + "'");
  return schema_from_json(json::parse(in));
}

inline Catalog load_catalog_files(const std::string& csv_path, const std::string& schema_path) {
  const Schema schema = load_schema_file(schema_path);
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw SchemaError("cannot open catalog file '" + csv_path + "'");
  return load_catalog(in, schema);
}

// ---------------------------------------------------------------------------
// Retrieval

struct CandidateSet {
  std::vector<std::size_t> items;  // catalog indices, catalog order
  FilterSet source_filters;
  std::vector<std::string> relaxed_dimensions;  // in the order they were dropped

  bool empty() const { return items.empty(); }
  std::size_t size() const { return items.size(); }
};

inline std::vector<std::size_t> scan(const Catalog& catalog, const FilterSet& filters) {
  std::vector<std::pair<std::size_t, const Predicate*>> active;
  for (const auto& [dim, pred] : filters.entries) active.emplace_back(catalog.schema().require(dim), &pred);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    bool ok = true;
    for (const auto& [d, pred] : active) {
      if (!matches(*pred, catalog.value(i, d))) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(i);
  }
  return out;
}

inline CandidateSet apply_filters(const Catalog& catalog, const FilterSet& filters) {
  validate_filters(catalog.schema(), filters);
  return CandidateSet{scan(catalog, filters), filters, {}};
}

// Drops active predicates in ascending relaxation rank until something
// matches. Filters that already match are returned untouched.
inline CandidateSet relax_filters(const Catalog& catalog, const FilterSet& filters) {
  validate_filters(catalog.schema(), filters);
  CandidateSet out{scan(catalog, filters), filters, {}};
  if (!out.empty()) return out;

  FilterSet remaining = filters;
  for (std::size_t d : catalog.schema().relaxation_order()) {
    const std::string& name = catalog.schema()[d].name;
    if (!remaining.contains(name)) continue;
    remaining.entries.erase(name);
    out.relaxed_dimensions.push_back(name);
    out.items = scan(catalog, remaining);
    if (!out.items.empty()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Discretization

inline constexpr std::size_t kDefaultBins = 3;

struct Bin {
  double lo = 0.0;  // smallest member value
  double hi = 0.0;  // largest member value
  std::size_t count = 0;
  std::string label;
};

struct Binning {
  std::size_t dimension = 0;
  std::vector<Bin> bins;
  std::vector<int> bin_of;  // per candidate position; -1 when the value is missing
  std::vector<double> cuts;  // upper boundary of each raw quantile bin except the last
};

inline std::string range_label(double lo, double hi, std::string_view unit) {
  if (lo == hi) return text::format_quantity(lo, unit);
  std::string a = text::format_quantity(lo, unit);
  std::string b = text::format_quantity(hi, unit);
  // "45K mi–60K mi" reads worse than "45K–60K mi".
  if (unit == "miles" && a.size() > 3 && a.compare(a.size() - 3, 3, " mi") == 0) a.resize(a.size() - 3);
  return a + "–" + b;
}

// Equal-frequency binning over the candidates' values. Boundary values go to
// the lower bin; empty bins are dropped, so fewer than `k` bins can result.
inline Binning discretize(const Catalog& catalog, std::size_t dim, std::span<const std::size_t> candidates,
                          std::size_t k = kDefaultBins) {
  const auto& attr = catalog.schema()[dim];
  if (!attr.continuous()) throw ContractError("discretize: '" + attr.name + "' is not continuous");
  if (k == 0) throw ContractError("discretize: bin count must be positive");

  Binning out;
  out.dimension = dim;
  out.bin_of.assign(candidates.size(), -1);

  std::vector<double> sorted;
  sorted.reserve(candidates.size());
  for (std::size_t c : candidates) {
    if (const auto* v = std::get_if<double>(&catalog.value(c, dim))) sorted.push_back(*v);
  }
  if (sorted.empty()) return out;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t pos = (i * n + k - 1) / k;  // ceil(i*n/k)
    out.cuts.push_back(sorted[pos == 0 ? 0 : pos - 1]);
  }

  auto raw_bin = [&](double v) {
    std::size_t b = 0;
    while (b < out.cuts.size() && v > out.cuts[b]) ++b;
    return b;
  };

  std::vector<Bin> raw(k);
  std::vector<bool> used(k, false);
  for (double v : sorted) {
    const std::size_t b = raw_bin(v);
    if (!used[b]) {
      raw[b].lo = v;
      used[b] = true;
    }
    raw[b].hi = v;
    ++raw[b].count;
  }
  std::vector<int> remap(k, -1);
  for (std::size_t b = 0; b < k; ++b) {
    if (!used[b]) continue;
    remap[b] = static_cast<int>(out.bins.size());
    raw[b].label = range_label(raw[b].lo, raw[b].hi, attr.unit);
    out.bins.push_back(raw[b]);
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (const auto* v = std::get_if<double>(&catalog.value(candidates[i], dim))) {
      out.bin_of[i] = remap[raw_bin(*v)];
    }
  }
  return out;
}

// Display form of a value: categorical token or formatted quantity.
inline std::string display_value(const AttributeSchema& attr, const AttributeValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<double>(&v)) return text::format_quantity(*d, attr.unit);
  return "";
}

}  // namespace idss

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

// Text vectors and cosine similarity. The default provider is signed feature
// hashing over unigrams and bigrams; any sentence encoder can stand in behind
// EmbeddingProvider.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idss/catalog.hpp"
#include "idss/text.hpp"

namespace idss {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<double> components) : components_(std::move(components)) {
    double s = 0.0;
    for (double c : components_) s += c * c;
    norm_ = std::sqrt(s);
  }

  std::size_t size() const { return components_.size(); }
  const std::vector<double>& components() const { return components_; }
  double operator[](std::size_t i) const { return components_[i]; }
  double norm() const { return norm_; }
  // The embedding of text with no tokens; similarity against it is 0.
  bool zero_information() const { return norm_ == 0.0; }

  bool operator==(const Vector& o) const { return components_ == o.components_; }

 private:
  std::vector<double> components_;
  double norm_ = 0.0;
};

// dot(a,b) / (|a||b|), clamped to [-1, 1]; 0 against a zero-information vector.
inline double cosine_similarity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw ContractError("cosine_similarity: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
  }
  if (a.zero_information() || b.zero_information()) return 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot / (a.norm() * b.norm()), -1.0, 1.0);
}

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual Vector embed(std::string_view text) const = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::string id() const = 0;
};

inline constexpr std::size_t kDefaultEmbeddingDim = 256;

// Lower-cased alphanumeric tokens and adjacent-token bigrams, each hashed
// (FNV-1a) into one of `dim` buckets with a hash-derived sign, then
// L2-normalized.
class HashingEmbedder final : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::size_t dim = kDefaultEmbeddingDim) : dim_(dim) {
    if (dim_ == 0) throw ContractError("HashingEmbedder: dimension must be positive");
  }

  Vector embed(std::string_view s) const override {
    std::vector<double> v(dim_, 0.0);
    const auto tokens = text::alnum_tokens(s);
    auto add = [&](std::string_view feature) {
      const std::uint64_t h = text::fnv1a64(feature);
      const double sign = ((h >> 32) & 1U) ? -1.0 : 1.0;
      v[h % dim_] += sign;
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      add(tokens[i]);
      if (i + 1 < tokens.size()) add(tokens[i] + " " + tokens[i + 1]);
    }
    double n = 0.0;
    for (double c : v) n += c * c;
    if (n > 0.0) {
      n = std::sqrt(n);
      for (double& c : v) c /= n;
    }
    return Vector(std::move(v));
  }

  std::size_t dimension() const override { return dim_; }
  std::string id() const override { return "hash" + std::to_string(dim_); }

 private:
  std::size_t dim_;
};

// On-disk cache of little-endian float32 vectors keyed by provider id and
// text hash, so runs against an external encoder can be replayed offline.
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::filesystem::path path_for(const std::string& provider_id, std::string_view s) const {
    return dir_ / (provider_id + "-" + text::hex64(text::fnv1a64(s)) + ".f32");
  }

  std::optional<Vector> load(const std::string& provider_id, std::string_view s, std::size_t dim) const {
    std::ifstream in(path_for(provider_id, s), std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() != dim * 4) return std::nullopt;
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      std::uint32_t u = 0;
      for (int b = 3; b >= 0; --b) u = (u << 8) | bytes[i * 4 + static_cast<std::size_t>(b)];
      v[i] = static_cast<double>(std::bit_cast<float>(u));
    }
    return Vector(std::move(v));
  }

  void store(const std::string& provider_id, std::string_view s, const Vector& v) const {
    std::vector<char> bytes(v.size() * 4);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::uint32_t u = std::bit_cast<std::uint32_t>(static_cast<float>(v[i]));
      for (int b = 0; b < 4; ++b) bytes[i * 4 + static_cast<std::size_t>(b)] = static_cast<char>((u >> (8 * b)) & 0xFF);
    }
    std::ofstream out(path_for(provider_id, s), std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }

 private:
  std::filesystem::path dir_;
};

// Serves vectors from the cache, computing and storing on a miss. Cached
// vectors carry float32 precision.
class CachingProvider final : public EmbeddingProvider {
 public:
  CachingProvider(std::shared_ptr<const EmbeddingProvider> inner, EmbeddingCache cache)
      : inner_(std::move(inner)), cache_(std::move(cache)) {}

  Vector embed(std::string_view s) const override {
    std::lock_guard lock(mu_);
    if (auto hit = cache_.load(inner_->id(), s, inner_->dimension())) return *hit;
    Vector v = inner_->embed(s);
    cache_.store(inner_->id(), s, v);
    return *cache_.load(inner_->id(), s, inner_->dimension());
  }
  std::size_t dimension() const override { return inner_->dimension(); }
  std::string id() const override { return inner_->id(); }

 private:
  std::shared_ptr<const EmbeddingProvider> inner_;
  EmbeddingCache cache_;
  mutable std::mutex mu_;
};

// Description and pros/cons phrase vectors for every item, computed once when
// the catalog is loaded.
struct CatalogEmbeddings {
  std::vector<Vector> descriptions;
  std::vector<std::vector<Vector>> pros;
  std::vector<std::vector<Vector>> cons;

  static CatalogEmbeddings build(const Catalog& catalog, const EmbeddingProvider& provider) {
    CatalogEmbeddings out;
    out.descriptions.reserve(catalog.size());
    out.pros.reserve(catalog.size());
    out.cons.reserve(catalog.size());
    for (const auto& item : catalog.items()) {
      out.descriptions.push_back(provider.embed(item.description));
      auto& p = out.pros.emplace_back();
      for (const auto& phrase : item.pros) p.push_back(provider.embed(phrase));
      auto& c = out.cons.emplace_back();
      for (const auto& phrase : item.cons) c.push_back(provider.embed(phrase));
    }
    return out;
  }
};

namespace detail {

inline std::string format_bound(double v, const AttributeSchema& attr) {
  return text::format_quantity(v, attr.unit);
}

inline std::string predicate_text(const Predicate& p, const AttributeSchema& attr) {
  if (const auto* eq = std::get_if<Equals>(&p)) return eq->value;
  if (const auto* in = std::get_if<OneOf>(&p)) {
    return text::join(std::vector<std::string>(in->values.begin(), in->values.end()), " or ");
  }
  const auto& r = std::get<Range>(p);
  if (r.lo && r.hi) return format_bound(*r.lo, attr) + " to " + format_bound(*r.hi, attr);
  if (r.hi) return "under " + format_bound(*r.hi, attr);
  if (r.lo) return "over " + format_bound(*r.lo, attr);
  return "any";
}

}  // namespace detail

// "body: SUV. price: under $30K. likes: fuel economy. avoids: road noise."
// Filters appear in schema order.
inline std::string build_query_text(const Schema& schema, const FilterSet& filters,
                                    const std::vector<std::string>& liked,
                                    const std::vector<std::string>& disliked) {
  std::vector<std::string> parts;
  for (const auto& attr : schema.attributes()) {
    auto it = filters.entries.find(attr.name);
    if (it == filters.entries.end()) continue;
    parts.push_back(attr.name + ": " + detail::predicate_text(it->second, attr) + ".");
  }
  if (!liked.empty()) parts.push_back("likes: " + text::join(liked, ", ") + ".");
  if (!disliked.empty()) parts.push_back("avoids: " + text::join(disliked, ", ") + ".");
  return text::join(parts, " ");
}

}  // namespace idss

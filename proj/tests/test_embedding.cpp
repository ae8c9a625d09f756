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

#include <cctype>
#include <cmath>
#include <filesystem>

#include <unistd.h>

#include <gtest/gtest.h>

#include "support.hpp"

namespace idss {
namespace {

// Straight-line reimplementation of the hashing encoder.
std::vector<double> oracle_embed(const std::string& s, std::size_t dim) {
  std::vector<std::string> toks;
  std::string cur;
  for (char ch : s + " ") {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    } else if (!cur.empty()) {
      toks.push_back(cur);
      cur.clear();
    }
  }
  auto fnv = [](const std::string& f) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : f) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return h;
  };
  std::vector<double> v(dim, 0.0);
  auto add = [&](const std::string& f) {
    const std::uint64_t h = fnv(f);
    v[h % dim] += ((h >> 32) & 1) ? -1.0 : 1.0;
  };
  for (std::size_t i = 0; i < toks.size(); ++i) {
    add(toks[i]);
    if (i + 1 < toks.size()) add(toks[i] + " " + toks[i + 1]);
  }
  double n = 0;
  for (double x : v) n += x * x;
  if (n > 0) {
    for (double& x : v) x /= std::sqrt(n);
  }
  return v;
}

TEST(Hashing, MatchesIndependentReimplementation) {
  const HashingEmbedder e;
  for (const char* s : {"great fuel economy", "Road NOISE!", "2019 Toyota RAV4 hybrid SUV, 30,000 miles", "a"}) {
    const Vector v = e.embed(s);
    const auto want = oracle_embed(s, 256);
    ASSERT_EQ(v.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_DOUBLE_EQ(v[i], want[i]) << s << " @" << i;
  }
}

TEST(Hashing, UnitNormAndZeroInformation) {
  const HashingEmbedder e(64);
  EXPECT_NEAR(e.embed("quiet cabin").norm(), 1.0, 1e-12);
  EXPECT_TRUE(e.embed("  ,;! ").zero_information());
  EXPECT_EQ(cosine_similarity(e.embed(""), e.embed("quiet cabin")), 0.0);
  EXPECT_EQ(e.id(), "hash64");
  EXPECT_THROW(HashingEmbedder(0), ContractError);
}

TEST(Hashing, OverlapOrdersSimilarity) {
  const HashingEmbedder e;
  const Vector q = e.embed("great fuel economy");
  const double same = cosine_similarity(q, e.embed("great fuel economy"));
  const double near = cosine_similarity(q, e.embed("excellent fuel economy"));
  const double far = cosine_similarity(q, e.embed("towing capacity"));
  EXPECT_NEAR(same, 1.0, 1e-12);
  EXPECT_GT(near, far);
  EXPECT_GT(near, 0.6);
}

TEST(Cosine, MatchesDotProductOracle) {
  const Vector a({1.0, 2.0, 3.0});
  const Vector b({-2.0, 0.5, 4.0});
  const double want = (1 * -2 + 2 * 0.5 + 3 * 4) / (std::sqrt(14.0) * std::sqrt(4 + 0.25 + 16));
  EXPECT_NEAR(cosine_similarity(a, b), want, 1e-15);
  EXPECT_THROW(cosine_similarity(a, Vector({1.0})), ContractError);
}

TEST(QueryText, GoldenStrings) {
  const Schema s = testing::toy_schema();
  FilterSet f;
  f.set("body", Equals{"SUV"});
  EXPECT_EQ(build_query_text(s, f, {"fuel economy"}, {}), "body: SUV. likes: fuel economy.");
  f.set("price", Range{std::nullopt, 30000.0});
  f.set("fuel", OneOf{{"hybrid", "electric"}});
  EXPECT_EQ(build_query_text(s, f, {}, {"road noise"}),
            "body: SUV. fuel: electric or hybrid. price: under $30K. avoids: road noise.");
  EXPECT_EQ(build_query_text(s, {}, {}, {}), "");
}

TEST(CatalogEmbeddings, OneVectorPerPhrase) {
  const Catalog c = testing::toy_catalog();
  const HashingEmbedder e;
  const auto emb = CatalogEmbeddings::build(c, e);
  ASSERT_EQ(emb.descriptions.size(), c.size());
  EXPECT_EQ(emb.pros[0].size(), 2u);
  EXPECT_EQ(emb.cons[2].size(), 2u);
  EXPECT_EQ(emb.pros[0][0], e.embed("great fuel economy"));
}

TEST(Cache, StoresAndReplaysFloat32Vectors) {
  const auto dir = std::filesystem::temp_directory_path() / ("idss-cache-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  auto inner = std::make_shared<HashingEmbedder>(32);
  const CachingProvider p(inner, EmbeddingCache(dir));
  const Vector first = p.embed("quiet cabin");
  EXPECT_TRUE(std::filesystem::exists(EmbeddingCache(dir).path_for("hash32", "quiet cabin")));
  const Vector again = p.embed("quiet cabin");
  EXPECT_EQ(first, again);
  const Vector exact = inner->embed("quiet cabin");
  for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(first[i], static_cast<double>(static_cast<float>(exact[i])));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace idss

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

// Final ordering of the candidate set.
//
//   ES: cosine similarity between a query built from filters and preferences
//       and each item description, greedily re-ordered with maximal marginal
//       relevance (MMR).
//   CR: greedy maximization of liked-feature coverage minus weighted
//       disliked-feature risk, where an item's alignment with a feature is the
//       best thresholded cosine against its pros (or cons) phrases.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "idss/catalog.hpp"
#include "idss/embedding.hpp"
#include "idss/error.hpp"

namespace idss {

enum class Strategy { kES, kCR };

inline std::string to_string(Strategy s) { return s == Strategy::kCR ? "cr" : "es"; }

inline Strategy strategy_from_string(std::string_view s) {
  const std::string l = text::lower(s);
  if (l == "es") return Strategy::kES;
  if (l == "cr") return Strategy::kCR;
  throw ContractError("unknown strategy '" + std::string(s) + "' (expected es or cr)");
}

struct ScoredCandidate {
  std::size_t item = 0;            // catalog index (or position, for the raw selectors)
  double relevance = 0.0;          // MMR score or marginal gain at selection time
  std::size_t selection_rank = 0;  // 1-based

  bool operator==(const ScoredCandidate&) const = default;
};

inline double mmr_score(double query_sim, double redundancy, double lambda) {
  return lambda * query_sim - (1.0 - lambda) * redundancy;
}

// Greedy MMR over positions 0..n-1. `pair_sim(i, j)` is the similarity of two
// positions. The first pick is argmax query_sim; each later pick maximizes
// lambda*sim(q,c) - (1-lambda)*max_{s in S} sim(c,s). Ties go to the lower
// position. Returned `item` fields are positions.
template <class PairSim>
std::vector<ScoredCandidate> mmr_select(std::span<const double> query_sim, PairSim&& pair_sim, std::size_t k,
                                        double lambda) {
  if (k == 0) throw ContractError("mmr_select: K must be at least 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ContractError("mmr_select: lambda must lie in [0, 1]");
  const std::size_t n = query_sim.size();
  std::vector<ScoredCandidate> out;
  if (n == 0) return out;

  std::vector<double> redundancy(n, 0.0);
  std::vector<bool> taken(n, false);
  const std::size_t picks = std::min(k, n);
  for (std::size_t round = 0; round < picks; ++round) {
    std::size_t best = n;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      // First round: rank on similarity alone so that lambda = 0 still
      // starts from the most relevant item.
      const double s = round == 0 ? query_sim[i] : mmr_score(query_sim[i], redundancy[i], lambda);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    taken[best] = true;
    out.push_back({best, round == 0 ? mmr_score(query_sim[best], 0.0, lambda) : best_score, round + 1});
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i]) redundancy[i] = round == 0 ? pair_sim(i, best) : std::max(redundancy[i], pair_sim(i, best));
    }
  }
  return out;
}

// max(0, t - tau)
inline double match_threshold(double t, double tau) { return std::max(0.0, t - tau); }

// Best thresholded cosine between a feature and an item's phrases; 0 when the
// item has none.
inline double phrase_alignment(const Vector& feature, std::span<const Vector> phrases, double tau) {
  double best = 0.0;
  for (const auto& z : phrases) best = std::max(best, match_threshold(cosine_similarity(feature, z), tau));
  return best;
}

// pos[j][v]: alignment of liked feature j with candidate position v;
// neg[r][v]: alignment of disliked feature r.
struct AlignmentTable {
  std::vector<std::vector<double>> pos;
  std::vector<std::vector<double>> neg;
  std::size_t candidates = 0;
};

inline AlignmentTable build_alignment(std::span<const Vector> liked, std::span<const Vector> disliked,
                                      std::span<const std::size_t> candidates, const CatalogEmbeddings& emb,
                                      double tau) {
  AlignmentTable t;
  t.candidates = candidates.size();
  for (const auto& f : liked) {
    auto& row = t.pos.emplace_back(candidates.size(), 0.0);
    for (std::size_t v = 0; v < candidates.size(); ++v) row[v] = phrase_alignment(f, emb.pros[candidates[v]], tau);
  }
  for (const auto& f : disliked) {
    auto& row = t.neg.emplace_back(candidates.size(), 0.0);
    for (std::size_t v = 0; v < candidates.size(); ++v) row[v] = phrase_alignment(f, emb.cons[candidates[v]], tau);
  }
  return t;
}

// Tracks the per-feature maxima of the selected set so marginal gains are
// O(features) per item.
class CoverageRiskState {
 public:
  explicit CoverageRiskState(const AlignmentTable& t)
      : table_(&t), cov_(t.pos.size(), 0.0), risk_(t.neg.size(), 0.0) {}

  double delta_coverage(std::size_t v) const {
    double g = 0.0;
    for (std::size_t j = 0; j < cov_.size(); ++j) g += std::max(0.0, table_->pos[j][v] - cov_[j]);
    return g;
  }

  double delta_risk(std::size_t v) const {
    double g = 0.0;
    for (std::size_t r = 0; r < risk_.size(); ++r) g += std::max(0.0, table_->neg[r][v] - risk_[r]);
    return g;
  }

  void add(std::size_t v) {
    for (std::size_t j = 0; j < cov_.size(); ++j) cov_[j] = std::max(cov_[j], table_->pos[j][v]);
    for (std::size_t r = 0; r < risk_.size(); ++r) risk_[r] = std::max(risk_[r], table_->neg[r][v]);
  }

  double coverage() const {
    double s = 0.0;
    for (double c : cov_) s += c;
    return s;
  }

  double risk() const {
    double s = 0.0;
    for (double r : risk_) s += r;
    return s;
  }

 private:
  const AlignmentTable* table_;
  std::vector<double> cov_;
  std::vector<double> risk_;
};

struct NoTieBreak {
  double operator()(std::size_t, std::span<const std::size_t>) const { return 0.0; }
};

inline constexpr double kGainTolerance = 1e-12;

// Greedy coverage-risk selection over positions 0..n-1: each step takes
// argmax [dCov(v|S) - lambda * dRisk(v|S)], filling all K slots even when the
// best gain is negative. Gains within kGainTolerance are ties, resolved by the
// larger `tie_score(v, selected)` and then by the lower position.
template <class TieScore = NoTieBreak>
std::vector<ScoredCandidate> coverage_risk_greedy(const AlignmentTable& table, std::size_t k, double lambda,
                                                  TieScore&& tie_score = {}) {
  if (k == 0) throw ContractError("coverage_risk_greedy: K must be at least 1");
  const std::size_t n = table.candidates;
  std::vector<ScoredCandidate> out;
  CoverageRiskState state(table);
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> selected;
  const std::size_t picks = std::min(k, n);
  for (std::size_t round = 0; round < picks; ++round) {
    std::size_t best = n;
    double best_gain = -std::numeric_limits<double>::infinity();
    double best_tie = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v) {
      if (taken[v]) continue;
      const double gain = state.delta_coverage(v) - lambda * state.delta_risk(v);
      if (gain > best_gain + kGainTolerance) {
        best = v;
        best_gain = gain;
        best_tie = tie_score(v, std::span<const std::size_t>(selected));
      } else if (gain >= best_gain - kGainTolerance) {
        const double t = tie_score(v, std::span<const std::size_t>(selected));
        if (t > best_tie) {
          best = v;
          best_gain = gain;
          best_tie = t;
        }
      }
    }
    taken[best] = true;
    state.add(best);
    selected.push_back(best);
    out.push_back({best, best_gain, round + 1});
  }
  return out;
}

// Coverage - lambda * Risk of an explicit set of positions.
inline double coverage_risk_objective(const AlignmentTable& table, std::span<const std::size_t> set, double lambda) {
  CoverageRiskState s(table);
  for (std::size_t v : set) s.add(v);
  return s.coverage() - lambda * s.risk();
}

struct RankingParams {
  std::size_t k = 9;
  double mmr_lambda = 0.85;
  double cr_lambda = 0.5;
  double match_tau = 0.6;
};

struct RankingInput {
  const Catalog* catalog = nullptr;
  const CatalogEmbeddings* embeddings = nullptr;
  const EmbeddingProvider* provider = nullptr;
  const FilterSet* filters = nullptr;
  const std::vector<std::string>* liked = nullptr;
  const std::vector<std::string>* disliked = nullptr;
};

namespace detail {

inline std::vector<ScoredCandidate> to_catalog_indices(std::vector<ScoredCandidate> picks,
                                                       std::span<const std::size_t> candidates) {
  for (auto& p : picks) p.item = candidates[p.item];
  return picks;
}

inline std::vector<double> query_similarities(const Vector& query, std::span<const std::size_t> candidates,
                                              const CatalogEmbeddings& emb) {
  std::vector<double> sims(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) sims[i] = cosine_similarity(query, emb.descriptions[candidates[i]]);
  return sims;
}

inline std::vector<ScoredCandidate> rank_es(const RankingInput& in, std::span<const std::size_t> candidates,
                                            const RankingParams& params) {
  const std::string q = build_query_text(in.catalog->schema(), *in.filters, *in.liked, *in.disliked);
  const Vector query = in.provider->embed(q);
  if (query.zero_information()) {
    // Nothing to be similar to: keep filter (catalog) order.
    std::vector<ScoredCandidate> out;
    for (std::size_t i = 0; i < std::min(params.k, candidates.size()); ++i) out.push_back({candidates[i], 0.0, i + 1});
    return out;
  }
  const auto sims = query_similarities(query, candidates, *in.embeddings);
  const auto& desc = in.embeddings->descriptions;
  auto pair_sim = [&](std::size_t a, std::size_t b) {
    return cosine_similarity(desc[candidates[a]], desc[candidates[b]]);
  };
  return to_catalog_indices(mmr_select(std::span<const double>(sims), pair_sim, params.k, params.mmr_lambda),
                            candidates);
}

inline std::vector<ScoredCandidate> rank_cr(const RankingInput& in, std::span<const std::size_t> candidates,
                                            const RankingParams& params) {
  std::vector<Vector> liked, disliked;
  for (const auto& p : *in.liked) liked.push_back(in.provider->embed(p));
  for (const auto& p : *in.disliked) disliked.push_back(in.provider->embed(p));
  const AlignmentTable table = build_alignment(liked, disliked, candidates, *in.embeddings, params.match_tau);

  // Equal-gain picks are ordered by their MMR score against the ES query.
  const std::string q = build_query_text(in.catalog->schema(), *in.filters, *in.liked, *in.disliked);
  const auto sims = query_similarities(in.provider->embed(q), candidates, *in.embeddings);
  const auto& desc = in.embeddings->descriptions;
  auto tie = [&](std::size_t v, std::span<const std::size_t> selected) {
    double red = 0.0;
    for (std::size_t s : selected) red = std::max(red, cosine_similarity(desc[candidates[v]], desc[candidates[s]]));
    return mmr_score(sims[v], red, params.mmr_lambda);
  };
  return to_catalog_indices(coverage_risk_greedy(table, params.k, params.cr_lambda, tie), candidates);
}

}  // namespace detail

// Dispatches on strategy. CR without any liked or disliked phrase has an
// identically zero objective, so it falls back to ES.
inline std::vector<ScoredCandidate> rank(Strategy strategy, const RankingInput& in,
                                         std::span<const std::size_t> candidates, const RankingParams& params) {
  if (params.k == 0) throw ContractError("rank: K must be at least 1");
  if (candidates.empty()) return {};
  if (strategy == Strategy::kCR && (!in.liked->empty() || !in.disliked->empty())) {
    return detail::rank_cr(in, candidates, params);
  }
  return detail::rank_es(in, candidates, params);
}

}  // namespace idss

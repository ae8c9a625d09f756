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

// The turn loop: parse, merge, retrieve (relaxing on an empty result), then
// either ask the most informative question or rank and present a grid.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idss/catalog.hpp"
#include "idss/config.hpp"
#include "idss/diversify.hpp"
#include "idss/embedding.hpp"
#include "idss/entropy.hpp"
#include "idss/parsing.hpp"
#include "idss/ranking.hpp"

namespace idss {

enum class Phase { kInterviewing, kRecommending, kDone };

inline std::string to_string(Phase p) {
  switch (p) {
    case Phase::kInterviewing:
      return "interviewing";
    case Phase::kRecommending:
      return "recommending";
    case Phase::kDone:
      return "done";
  }
  return "interviewing";
}

struct SessionState {
  std::string session_id;
  Strategy strategy = Strategy::kES;
  FilterSet filters;
  std::vector<std::string> liked;
  std::vector<std::string> disliked;
  Patience patience = Patience::kPatient;
  std::vector<std::string> asked_dimensions;
  std::vector<TurnRecord> history;
  int max_questions = 2;
  Phase phase = Phase::kInterviewing;
  std::vector<std::string> relaxed_dimensions;  // from the latest retrieval

  std::size_t questions_asked() const { return asked_dimensions.size(); }
  bool operator==(const SessionState&) const = default;
};

inline json to_json(const SessionState& s) {
  json history = json::array();
  for (const auto& t : s.history) history.push_back(to_json(t));
  return json{{"session_id", s.session_id},
              {"strategy", to_string(s.strategy)},
              {"filters", filters_to_json(s.filters)},
              {"liked", s.liked},
              {"disliked", s.disliked},
              {"patience", to_string(s.patience)},
              {"asked_dimensions", s.asked_dimensions},
              {"questions_asked", s.questions_asked()},
              {"max_questions", s.max_questions},
              {"phase", to_string(s.phase)},
              {"relaxed_dimensions", s.relaxed_dimensions},
              {"history", std::move(history)}};
}

struct QuestionSpec {
  std::string dimension;
  std::string distribution_context;
  std::string question_text;

  bool operator==(const QuestionSpec&) const = default;
};

inline json to_json(const QuestionSpec& q) {
  return json{{"dimension", q.dimension}, {"distribution_context", q.distribution_context}, {"text", q.question_text}};
}

// "40% gasoline, 35% hybrid, 25% electric": the three largest shares,
// rounded to whole percent.
inline std::string share_context(const ValueDistribution& dist, std::size_t top = 3) {
  std::vector<std::string> parts;
  const auto shares = dist.by_share();
  for (std::size_t i = 0; i < std::min(top, shares.size()); ++i) {
    const double pct = 100.0 * static_cast<double>(shares[i].second) / static_cast<double>(dist.total);
    parts.push_back(std::to_string(static_cast<long long>(std::lround(pct))) + "% " + shares[i].first);
  }
  return text::join(parts, ", ");
}

// Deterministic question text for `dim` over the candidate set. The history
// is accepted for parity with generated (non-template) questions.
inline QuestionSpec generate_question_template(const Catalog& catalog, std::size_t dim,
                                               std::span<const std::size_t> candidates,
                                               std::span<const TurnRecord> history = {}) {
  (void)history;
  const auto& attr = catalog.schema()[dim];
  QuestionSpec q;
  q.dimension = attr.name;
  if (attr.continuous()) {
    const Binning b = discretize(catalog, dim, candidates);
    if (b.cuts.size() >= 2) {
      const std::string lo = text::format_quantity(b.cuts.front(), attr.unit);
      const std::string hi = text::format_quantity(b.cuts.back(), attr.unit);
      q.distribution_context = lo == hi ? "around " + lo : "between " + lo + " and " + hi;
    }
    const std::string unit = text::lower(attr.unit);
    q.question_text = (unit == "usd" || unit == "$") ? "What's your budget?"
                                                      : "What range of " + attr.label() + " works for you?";
    if (!q.distribution_context.empty()) q.question_text += " Most options fall " + q.distribution_context + ".";
    return q;
  }
  const ValueDistribution dist = value_distribution(catalog, candidates, dim);
  q.distribution_context = dist.total ? share_context(dist) : "";
  q.question_text = "Do you have a preference for " + attr.label() + "?";
  if (!q.distribution_context.empty()) q.question_text += " Options here are " + q.distribution_context + ".";
  return q;
}

// Next dimension to ask about, or nullopt. Entropy order picks the argmax
// over unspecified, unasked dimensions above the threshold; fixed order takes
// the next unasked dimension in schema order regardless of either.
inline std::optional<std::size_t> next_question_dimension(const SessionState& state, const EntropyReport& report,
                                                          const EngineConfig& cfg) {
  const std::set<std::string> asked(state.asked_dimensions.begin(), state.asked_dimensions.end());
  if (cfg.question_order == QuestionOrder::kFixed) {
    for (const auto& d : report.dimensions) {
      if (!asked.count(d.dimension)) return d.index;
    }
    return std::nullopt;
  }
  return select_question_dimension(report, state.filters.dimensions(), asked, cfg.tau_h, cfg.entropy_mode);
}

inline bool should_stop(const SessionState& state, const EntropyReport& report, const EngineConfig& cfg) {
  if (state.patience == Patience::kImpatient) return true;
  if (static_cast<int>(state.questions_asked()) >= state.max_questions) return true;
  return !next_question_dimension(state, report, cfg).has_value();
}

struct TurnResult {
  enum class Type { kQuestion, kRecommendations };
  Type type = Type::kQuestion;
  std::optional<QuestionSpec> question;
  std::optional<Grid> grid;
  std::vector<std::string> relaxed;
  std::size_t candidate_count = 0;
  EntropyReport entropy;
  std::vector<ScoredCandidate> ranked;
  ParsedTurn parsed;
};

inline json to_json(const TurnResult& r, bool debug = false) {
  json j{{"type", r.type == TurnResult::Type::kQuestion ? "question" : "recommendations"},
         {"relaxed", r.relaxed},
         {"candidate_count", r.candidate_count}};
  if (r.question) j["question"] = to_json(*r.question);
  if (r.grid) j["grid"] = to_json(*r.grid);
  if (debug) j["entropy_debug"] = to_json(r.entropy);
  return j;
}

// Shared, read-only engine: catalog, precomputed embeddings, parser.
class Engine {
 public:
  Engine(std::shared_ptr<const Catalog> catalog, std::shared_ptr<const EmbeddingProvider> provider,
         std::shared_ptr<const ParserAdapter> parser = std::make_shared<RuleBasedParser>())
      : catalog_(std::move(catalog)),
        provider_(std::move(provider)),
        parser_(std::move(parser)),
        embeddings_(CatalogEmbeddings::build(*catalog_, *provider_)),
        summary_(summarize(*catalog_)) {}

  const Catalog& catalog() const { return *catalog_; }
  const EmbeddingProvider& provider() const { return *provider_; }
  const CatalogEmbeddings& embeddings() const { return embeddings_; }
  const SchemaSummary& schema_summary() const { return summary_; }
  const ParserAdapter& parser() const { return *parser_; }

  SessionState new_session(std::string id, Strategy strategy, int max_questions) const {
    if (max_questions < 0 || max_questions > 5) throw ContractError("k must lie in [0, 5]");
    SessionState s;
    s.session_id = std::move(id);
    s.strategy = strategy;
    s.max_questions = max_questions;
    return s;
  }

  // Runs one user turn. The state is only written once the whole turn has
  // succeeded.
  TurnResult advance_turn(SessionState& state, std::string_view user_text, const EngineConfig& cfg) const {
    if (state.phase == Phase::kDone) throw ConflictError("session '" + state.session_id + "' is finished");
    if (text::trim(user_text).empty()) throw ContractError("message text is empty");
    cfg.validate();

    SessionState next = state;
    TurnResult out;
    out.parsed = parser_->parse(user_text, summary_, next.history);
    validate_filters(catalog_->schema(), out.parsed.filter_delta);

    next.filters = merge_filters(next.filters, out.parsed.filter_delta);
    merge_phrases(next.liked, out.parsed.liked);
    merge_phrases(next.disliked, out.parsed.disliked);
    if (detect_impatience(out.parsed)) next.patience = Patience::kImpatient;
    next.history.push_back({"user", std::string(user_text), out.parsed.filter_delta, std::nullopt});

    CandidateSet cands = apply_filters(*catalog_, next.filters);
    if (cands.empty()) cands = relax_filters(*catalog_, next.filters);
    next.relaxed_dimensions = cands.relaxed_dimensions;
    out.relaxed = cands.relaxed_dimensions;
    out.candidate_count = cands.size();
    out.entropy = entropy_report(*catalog_, cands.items);

    if (!should_stop(next, out.entropy, cfg)) {
      const std::size_t dim = *next_question_dimension(next, out.entropy, cfg);
      QuestionSpec q = generate_question_template(*catalog_, dim, cands.items, next.history);
      next.asked_dimensions.push_back(q.dimension);
      next.history.push_back({"agent", q.question_text, {}, q.dimension});
      out.type = TurnResult::Type::kQuestion;
      out.question = std::move(q);
      state = std::move(next);
      return out;
    }

    next.phase = Phase::kRecommending;
    const RankingInput in{catalog_.get(), &embeddings_, provider_.get(), &next.filters, &next.liked, &next.disliked};
    out.ranked = rank(next.strategy, in, cands.items, cfg.ranking());
    out.grid = present(*catalog_, out.ranked, next.filters.dimensions(), cfg.rows, cfg.cols);
    out.type = TurnResult::Type::kRecommendations;

    std::string note = "Here are " + std::to_string(out.grid->item_count()) + " options";
    if (out.grid->dimension) note += " grouped by " + catalog_->schema()[*catalog_->schema().find(*out.grid->dimension)].label();
    note += ".";
    if (!out.relaxed.empty()) note += " Nothing matched every filter, so I relaxed: " + text::join(out.relaxed, ", ") + ".";
    next.history.push_back({"agent", note, {}, std::nullopt});
    next.phase = Phase::kDone;
    state = std::move(next);
    return out;
  }

 private:
  std::shared_ptr<const Catalog> catalog_;
  std::shared_ptr<const EmbeddingProvider> provider_;
  std::shared_ptr<const ParserAdapter> parser_;
  CatalogEmbeddings embeddings_;
  SchemaSummary summary_;
};

// ---------------------------------------------------------------------------
// Session store

// In-memory sessions with one in-flight turn per session. Readers see the
// last committed state. An optional directory receives one JSON-lines event
// log per session.
class SessionStore {
 public:
  explicit SessionStore(std::string event_log_dir = {}, std::uint64_t id_seed = std::random_device{}())
      : log_dir_(std::move(event_log_dir)), rng_(id_seed) {
    if (!log_dir_.empty()) std::filesystem::create_directories(log_dir_);
  }

  struct Entry {
    std::mutex turn;                 // held for the duration of a turn
    mutable std::mutex state_mu;     // guards `state`
    SessionState state;
    EngineConfig config;
    std::chrono::system_clock::time_point created_at;
  };

  std::string create(const Engine& engine, Strategy strategy, int max_questions, const EngineConfig& cfg) {
    auto entry = std::make_shared<Entry>();
    entry->config = cfg;
    entry->created_at = std::chrono::system_clock::now();
    std::string id;
    {
      std::lock_guard lock(mu_);
      do {
        id = text::hex64(rng_());
      } while (sessions_.count(id));
      entry->state = engine.new_session(id, strategy, max_questions);
      sessions_.emplace(id, entry);
    }
    log(id, json{{"event", "created"}, {"strategy", to_string(strategy)}, {"k", max_questions}});
    return id;
  }

  SessionState snapshot(const std::string& id) const {
    auto e = find(id);
    std::lock_guard lock(e->state_mu);
    return e->state;
  }

  std::chrono::system_clock::time_point created_at(const std::string& id) const { return find(id)->created_at; }

  // Fails with ConflictError when another turn on the same session is running.
  TurnResult run_turn(const Engine& engine, const std::string& id, std::string_view text) {
    auto e = find(id);
    std::unique_lock turn(e->turn, std::try_to_lock);
    if (!turn.owns_lock()) throw ConflictError("session '" + id + "' is busy with another message");
    SessionState working;
    {
      std::lock_guard lock(e->state_mu);
      working = e->state;
    }
    TurnResult r = engine.advance_turn(working, text, e->config);
    {
      std::lock_guard lock(e->state_mu);
      e->state = std::move(working);
    }
    log(id, json{{"event", "turn"}, {"text", std::string(text)}, {"parsed", to_json(r.parsed)},
                 {"result", to_json(r)}});
    return r;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
  }

 private:
  std::shared_ptr<Entry> find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
    return it->second;
  }

  void log(const std::string& id, const json& event) {
    if (log_dir_.empty()) return;
    std::lock_guard lock(log_mu_);
    std::ofstream out(std::filesystem::path(log_dir_) / (id + ".jsonl"), std::ios::app);
    out << event.dump() << '\n';
  }

  std::string log_dir_;
  mutable std::mutex mu_;
  std::mutex log_mu_;
  std::mt19937_64 rng_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace idss

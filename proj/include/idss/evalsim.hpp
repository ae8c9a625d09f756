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

// Offline evaluation: persona-scripted dialogues against the engine, a
// deterministic constraint judge, top-k metrics, and the ablation suite.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "idss/catalog.hpp"
#include "idss/config.hpp"
#include "idss/dialogue.hpp"
#include "idss/diversify.hpp"
#include "idss/embedding.hpp"
#include "idss/parsing.hpp"
#include "idss/ranking.hpp"

namespace idss {

// ---------------------------------------------------------------------------
// Personas

struct Persona {
  std::string persona_id;
  std::string query_type;  // "short" or "long"
  std::string initial_query;
  FilterSet hard_constraints;
  std::vector<std::string> liked_truth;
  std::vector<std::string> disliked_truth;
  std::map<std::string, std::vector<std::string>> answer_script;  // "*" holds fallbacks
  Patience style = Patience::kPatient;
  std::optional<double> max_price;
  std::string grounding_item;
};

inline Persona persona_from_json(const json& j) {
  Persona p;
  p.persona_id = j.at("persona_id").get<std::string>();
  p.query_type = j.value("query_type", "short");
  p.initial_query = j.at("initial_query").get<std::string>();
  if (j.contains("hard_constraints")) p.hard_constraints = filters_from_json(j.at("hard_constraints"));
  if (j.contains("liked_truth")) p.liked_truth = j.at("liked_truth").get<std::vector<std::string>>();
  if (j.contains("disliked_truth")) p.disliked_truth = j.at("disliked_truth").get<std::vector<std::string>>();
  if (j.contains("answer_script")) {
    for (const auto& [dim, v] : j.at("answer_script").items()) {
      p.answer_script[dim] = v.is_string() ? std::vector<std::string>{v.get<std::string>()}
                                           : v.get<std::vector<std::string>>();
    }
  }
  p.style = patience_from_string(j.value("style", "patient"));
  if (j.contains("max_price") && !j.at("max_price").is_null()) p.max_price = j.at("max_price").get<double>();
  p.grounding_item = j.value("grounding_item", "");
  if (p.initial_query.empty()) throw ContractError("persona '" + p.persona_id + "': empty initial_query");
  return p;
}

// Constraints must name schema dimensions with matching predicate kinds, and
// every dimension needs a scripted or fallback answer.
inline void validate_persona(const Persona& p, const Schema& schema) {
  validate_filters(schema, p.hard_constraints);
  if (!p.answer_script.count("*")) {
    for (const auto& a : schema.attributes()) {
      if (!p.answer_script.count(a.name)) {
        throw ContractError("persona '" + p.persona_id + "': no answer for '" + a.name + "' and no fallback");
      }
    }
  }
  for (const auto& [dim, answers] : p.answer_script) {
    if (answers.empty()) throw ContractError("persona '" + p.persona_id + "': empty answers for '" + dim + "'");
    if (dim != "*" && !schema.find(dim)) throw SchemaError("persona '" + p.persona_id + "': unknown dimension '" + dim + "'");
  }
}

// All *.json files in `dir`, by file name.
inline std::vector<Persona> load_personas(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Persona> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    try {
      out.push_back(persona_from_json(json::parse(in)));
    } catch (const json::exception& e) {
      throw ContractError(f.string() + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulation

struct SimulationResult {
  std::string persona_id;
  std::vector<TurnRecord> transcript;
  std::vector<QuestionSpec> questions;
  std::optional<Grid> grid;
  std::vector<std::string> relaxed;
  std::optional<std::string> error;  // set when the engine failed mid-run
};

inline constexpr const char* kImpatientSuffix = " Just show me what you have.";

// Answers each question from the script (variant chosen by the seeded RNG).
// Impatient personas signal impatience after 0 or 1 answered questions,
// chosen by the same RNG; the signal rides on the message that also carries
// their answer.
inline SimulationResult simulate(const Persona& persona, const Engine& engine, const EngineConfig& cfg,
                                 Strategy strategy, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ text::fnv1a64(persona.persona_id));
  auto pick = [&](const std::vector<std::string>& v) -> const std::string& {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  const int impatient_after =
      persona.style == Patience::kImpatient ? std::uniform_int_distribution<int>(0, 1)(rng) : -1;

  SimulationResult out;
  out.persona_id = persona.persona_id;
  SessionState state = engine.new_session(persona.persona_id, strategy, cfg.max_questions);
  std::string message = persona.initial_query;
  if (impatient_after == 0) message += kImpatientSuffix;

  int answered = 0;
  try {
    for (int turn = 0; turn <= cfg.max_questions + 1 && state.phase != Phase::kDone; ++turn) {
      TurnResult r = engine.advance_turn(state, message, cfg);
      out.transcript = state.history;
      out.relaxed = r.relaxed;
      if (r.type == TurnResult::Type::kRecommendations) {
        out.grid = std::move(r.grid);
        break;
      }
      out.questions.push_back(*r.question);
      auto it = persona.answer_script.find(r.question->dimension);
      if (it == persona.answer_script.end() || it->second.empty()) it = persona.answer_script.find("*");
      message = it != persona.answer_script.end() && !it->second.empty() ? pick(it->second) : "No preference.";
      ++answered;
      if (answered == impatient_after) message += kImpatientSuffix;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Judge

enum class Assessment { kSatisfied, kNotSatisfied, kNotMentioned };

inline std::string to_string(Assessment a) {
  switch (a) {
    case Assessment::kSatisfied:
      return "satisfied";
    case Assessment::kNotSatisfied:
      return "not_satisfied";
    case Assessment::kNotMentioned:
      return "not_mentioned";
  }
  return "not_mentioned";
}

struct AttributeAssessment {
  Assessment status = Assessment::kNotMentioned;
  std::string rationale;
};

struct JudgeVerdict {
  std::string item_id;
  bool satisfied = false;
  double confidence = 1.0;
  std::map<std::string, AttributeAssessment> attributes;
};

namespace eval_detail {

inline std::string describe(const Predicate& p, const AttributeSchema& attr) {
  if (const auto* eq = std::get_if<Equals>(&p)) return "= " + eq->value;
  if (const auto* in = std::get_if<OneOf>(&p)) {
    return "in {" + text::join(std::vector<std::string>(in->values.begin(), in->values.end()), ", ") + "}";
  }
  const auto& r = std::get<Range>(p);
  std::string s;
  if (r.lo) s += ">= " + text::format_quantity(*r.lo, attr.unit);
  if (r.lo && r.hi) s += " and ";
  if (r.hi) s += "<= " + text::format_quantity(*r.hi, attr.unit);
  return s.empty() ? "any" : s;
}

}  // namespace eval_detail

// Scores an item against the persona's hard constraints only; liked and
// disliked phrases are not judged.
inline JudgeVerdict judge(const Persona& persona, const Catalog& catalog, std::size_t item) {
  JudgeVerdict v;
  v.item_id = catalog.item(item).id;
  std::size_t mentioned = 0, ok = 0;
  for (std::size_t d = 0; d < catalog.schema().size(); ++d) {
    const auto& attr = catalog.schema()[d];
    AttributeAssessment a;
    auto it = persona.hard_constraints.entries.find(attr.name);
    if (it == persona.hard_constraints.entries.end()) {
      a.rationale = "no constraint";
    } else {
      ++mentioned;
      const auto& value = catalog.value(item, d);
      const bool hit = matches(it->second, value);
      ok += hit ? 1 : 0;
      a.status = hit ? Assessment::kSatisfied : Assessment::kNotSatisfied;
      const std::string shown = is_missing(value) ? "missing" : display_value(attr, value);
      a.rationale = shown + (hit ? " meets " : " fails ") + eval_detail::describe(it->second, attr);
    }
    v.attributes[attr.name] = std::move(a);
  }
  v.satisfied = ok == mentioned;
  v.confidence = mentioned == 0 ? 1.0 : static_cast<double>(ok) / static_cast<double>(mentioned);
  return v;
}

inline std::vector<JudgeVerdict> judge_list(const Persona& persona, const Catalog& catalog,
                                            std::span<const GridCell> items) {
  std::vector<JudgeVerdict> out;
  for (const auto& c : items) {
    const auto idx = catalog.find(c.id);
    if (!idx) throw NotFoundError("judge: unknown item '" + c.id + "'");
    out.push_back(judge(persona, catalog, *idx));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metrics

inline std::vector<int> relevance(std::span<const JudgeVerdict> verdicts) {
  std::vector<int> rel;
  for (const auto& v : verdicts) rel.push_back(v.satisfied ? 1 : 0);
  return rel;
}

inline void require_positive_k(long k, const char* what) {
  if (k <= 0) throw ContractError(std::string(what) + ": k must be positive");
}

inline std::size_t satisfied_count_at_k(std::span<const int> rel, long k) {
  require_positive_k(k, "satisfied_count_at_k");
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(rel.size(), static_cast<std::size_t>(k)); ++i) n += rel[i] ? 1 : 0;
  return n;
}

// Lists shorter than k count the missing positions as irrelevant.
inline double precision_at_k(std::span<const int> rel, long k) {
  require_positive_k(k, "precision_at_k");
  return static_cast<double>(satisfied_count_at_k(rel, k)) / static_cast<double>(k);
}

inline double dcg_at_k(std::span<const int> rel, long k) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(rel.size(), static_cast<std::size_t>(k)); ++i) {
    dcg += (std::pow(2.0, rel[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

// 0 when nothing is relevant.
inline double ndcg_at_k(std::span<const int> rel, long k) {
  require_positive_k(k, "ndcg_at_k");
  std::vector<int> ideal(rel.begin(), rel.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg_at_k(ideal, k);
  return idcg > 0.0 ? dcg_at_k(rel, k) / idcg : 0.0;
}

inline double precision_at_k(std::span<const JudgeVerdict> v, long k) { return precision_at_k(relevance(v), k); }
inline double ndcg_at_k(std::span<const JudgeVerdict> v, long k) { return ndcg_at_k(relevance(v), k); }
inline std::size_t satisfied_count_at_k(std::span<const JudgeVerdict> v, long k) {
  return satisfied_count_at_k(relevance(v), k);
}

// Mean over pairs of (1 - cosine), each pair clamped to [0, 1]; 0 below two
// items.
inline double ild(std::span<const Vector> vectors) {
  if (vectors.size() < 2) return 0.0;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      sum += std::clamp(1.0 - cosine_similarity(vectors[i], vectors[j]), 0.0, 1.0);
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

// Over item descriptions, embedded with `provider`.
inline double ild(const Catalog& catalog, std::span<const GridCell> items, const EmbeddingProvider& provider) {
  std::vector<Vector> v;
  for (const auto& c : items) {
    const auto idx = catalog.find(c.id);
    if (!idx) throw NotFoundError("ild: unknown item '" + c.id + "'");
    v.push_back(provider.embed(catalog.item(*idx).description));
  }
  return ild(v);
}

inline double ild(const Catalog& catalog, std::span<const GridCell> items, const CatalogEmbeddings& emb) {
  std::vector<Vector> v;
  for (const auto& c : items) {
    const auto idx = catalog.find(c.id);
    if (!idx) throw NotFoundError("ild: unknown item '" + c.id + "'");
    v.push_back(emb.descriptions[*idx]);
  }
  return ild(v);
}

struct RateCounter {
  std::size_t satisfied = 0;
  std::size_t assessed = 0;
};

inline void count_attr_sat(std::span<const JudgeVerdict> verdicts, std::map<std::string, RateCounter>& into) {
  for (const auto& v : verdicts) {
    for (const auto& [name, a] : v.attributes) {
      if (a.status == Assessment::kNotMentioned) continue;
      auto& c = into[name];
      ++c.assessed;
      c.satisfied += a.status == Assessment::kSatisfied ? 1 : 0;
    }
  }
}

// satisfied / assessed per attribute; never-assessed attributes are absent.
inline std::map<std::string, double> attr_sat_rate(std::span<const JudgeVerdict> verdicts) {
  std::map<std::string, RateCounter> counts;
  count_attr_sat(verdicts, counts);
  std::map<std::string, double> out;
  for (const auto& [name, c] : counts) out[name] = static_cast<double>(c.satisfied) / static_cast<double>(c.assessed);
  return out;
}

inline constexpr double kConfidenceThreshold = 0.51;

struct AggregatedVerdict {
  std::string item_id;
  bool satisfied = false;
  double confidence = 0.0;  // mean over runs
};

struct Reassessment {
  std::vector<AggregatedVerdict> verdicts;  // list order of the first run
  double precision = 0.0;
  double ndcg = 0.0;
  std::size_t satisfied_count = 0;
  // Over the retained items (confidence >= tau) of the top k, in list order:
  // precision = satisfied / retained and nDCG at k = retained. Both 0 when
  // nothing is retained.
  std::size_t retained = 0;
  double filtered_precision = 0.0;
  double filtered_ndcg = 0.0;
};

// Majority label per item across runs; a tied vote goes to the side whose
// votes carry the higher mean confidence, and to unsatisfied if that ties too.
inline Reassessment confidence_filter_and_reassess(std::span<const std::vector<JudgeVerdict>> runs, long k,
                                                   double tau = kConfidenceThreshold) {
  require_positive_k(k, "confidence_filter_and_reassess");
  Reassessment out;
  if (runs.empty()) return out;
  const auto& first = runs.front();
  for (const auto& run : runs) {
    if (run.size() != first.size()) throw ContractError("confidence_filter_and_reassess: runs cover different items");
    for (std::size_t i = 0; i < run.size(); ++i) {
      if (run[i].item_id != first[i].item_id) {
        throw ContractError("confidence_filter_and_reassess: runs cover different items");
      }
    }
  }
  std::vector<int> rel, kept_rel;
  for (std::size_t i = 0; i < first.size(); ++i) {
    std::size_t yes = 0, no = 0;
    double c_yes = 0.0, c_no = 0.0, c_all = 0.0;
    for (const auto& run : runs) {
      c_all += run[i].confidence;
      if (run[i].satisfied) {
        ++yes;
        c_yes += run[i].confidence;
      } else {
        ++no;
        c_no += run[i].confidence;
      }
    }
    bool label = yes > no;
    if (yes == no) label = c_yes / static_cast<double>(yes) > c_no / static_cast<double>(no);
    AggregatedVerdict a{first[i].item_id, label, c_all / static_cast<double>(runs.size())};
    rel.push_back(label ? 1 : 0);
    if (i < static_cast<std::size_t>(k) && a.confidence >= tau) kept_rel.push_back(label ? 1 : 0);
    out.verdicts.push_back(std::move(a));
  }
  out.precision = precision_at_k(rel, k);
  out.ndcg = ndcg_at_k(rel, k);
  out.satisfied_count = satisfied_count_at_k(rel, k);
  out.retained = kept_rel.size();
  if (!kept_rel.empty()) {
    const long kk = static_cast<long>(kept_rel.size());
    out.filtered_precision = precision_at_k(kept_rel, kk);
    out.filtered_ndcg = ndcg_at_k(kept_rel, kk);
  }
  return out;
}

struct QuestionJudgement {
  bool relevance = true;
  bool newness = true;
};

// Newness fails when the dimension was asked before or constrained by an
// earlier user turn; relevance fails when it is not a schema dimension.
inline QuestionJudgement question_judge(const QuestionSpec& q, std::span<const TurnRecord> prior,
                                        const Schema& schema) {
  QuestionJudgement j;
  j.relevance = schema.find(q.dimension).has_value();
  for (const auto& t : prior) {
    if (t.speaker == "agent" && t.dimension && *t.dimension == q.dimension) j.newness = false;
    if (t.speaker == "user" && t.delta.contains(q.dimension)) j.newness = false;
  }
  return j;
}

// Each question of a finished transcript, judged against the turns before it.
inline std::vector<QuestionJudgement> judge_questions(std::span<const TurnRecord> transcript, const Schema& schema) {
  std::vector<QuestionJudgement> out;
  for (std::size_t i = 0; i < transcript.size(); ++i) {
    const auto& t = transcript[i];
    if (t.speaker != "agent" || !t.dimension) continue;
    out.push_back(question_judge(QuestionSpec{*t.dimension, "", t.text}, transcript.first(i), schema));
  }
  return out;
}

// Reported, not scored: how many of the persona's liked phrases find a
// matching pros phrase (alignment > 0) per recommended item.
inline double preference_echo(const Persona& persona, const Catalog& catalog, std::span<const GridCell> items,
                              const CatalogEmbeddings& emb, const EmbeddingProvider& provider,
                              double tau = 0.6) {
  if (items.empty() || persona.liked_truth.empty()) return 0.0;
  std::vector<Vector> liked;
  for (const auto& p : persona.liked_truth) liked.push_back(provider.embed(p));
  std::size_t hits = 0;
  for (const auto& c : items) {
    const auto idx = catalog.find(c.id);
    if (!idx) continue;
    for (const auto& f : liked) hits += phrase_alignment(f, emb.pros[*idx], tau) > 0.0 ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(items.size());
}

// ---------------------------------------------------------------------------
// Suite

struct Ablation {
  bool no_mmr = false;
  bool no_entropyq = false;

  std::string label() const {
    if (no_mmr && no_entropyq) return "-MMR and EntropyQ";
    if (no_mmr) return "-MMR";
    if (no_entropyq) return "-EntropyQ";
    return "Full";
  }
  EngineConfig apply(EngineConfig cfg) const {
    if (no_mmr) cfg.mmr_lambda = 1.0;
    if (no_entropyq) cfg.question_order = QuestionOrder::kFixed;
    return cfg;
  }
  bool operator==(const Ablation&) const = default;
};

inline const std::vector<Ablation>& all_ablations() {
  static const std::vector<Ablation> a{{false, false}, {true, false}, {false, true}, {true, true}};
  return a;
}

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over seeds
};

inline Stat summarize_seeds(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

struct CellReport {
  std::string query_type;
  Strategy strategy = Strategy::kES;
  Ablation ablation;
  std::size_t personas = 0;
  std::map<std::string, Stat> metrics;
  std::map<std::string, Stat> attr_sat;
  std::size_t errors = 0;
};

struct SuiteReport {
  std::size_t k = 9;
  std::size_t seeds = 0;
  std::uint64_t base_seed = 0;
  std::vector<CellReport> cells;

  const CellReport* find(std::string_view query_type, Strategy s, const Ablation& a) const {
    for (const auto& c : cells) {
      if (c.query_type == query_type && c.strategy == s && c.ablation == a) return &c;
    }
    return nullptr;
  }
};

struct SuiteOptions {
  std::vector<Strategy> strategies{Strategy::kES, Strategy::kCR};
  std::vector<Ablation> ablations = all_ablations();
  std::size_t seeds = 3;
  std::uint64_t base_seed = 0;
  std::size_t threads = 1;
  double confidence_tau = kConfidenceThreshold;
};

// Per-persona numbers for one simulation.
struct PersonaMetrics {
  double precision = 0.0, ndcg = 0.0, sat = 0.0, ild = 0.0;
  double filtered_precision = 0.0, filtered_ndcg = 0.0, echo = 0.0;
  std::size_t questions = 0, relevant_q = 0, new_q = 0;
  std::vector<JudgeVerdict> verdicts;
  bool error = false;
};

inline PersonaMetrics evaluate_persona(const Persona& p, const Engine& engine, const EngineConfig& cfg,
                                       Strategy strategy, std::uint64_t seed, double tau) {
  PersonaMetrics m;
  const SimulationResult sim = simulate(p, engine, cfg, strategy, seed);
  m.error = sim.error.has_value();
  const long k = static_cast<long>(cfg.top_k);
  const std::vector<GridCell> items = sim.grid ? flatten_row_major(*sim.grid) : std::vector<GridCell>{};
  m.verdicts = judge_list(p, engine.catalog(), items);
  m.precision = precision_at_k(m.verdicts, k);
  m.ndcg = ndcg_at_k(m.verdicts, k);
  m.sat = static_cast<double>(satisfied_count_at_k(m.verdicts, k));
  m.ild = ild(engine.catalog(), items, engine.embeddings());
  const std::vector<std::vector<JudgeVerdict>> runs{m.verdicts};
  const Reassessment r = confidence_filter_and_reassess(runs, k, tau);
  m.filtered_precision = r.filtered_precision;
  m.filtered_ndcg = r.filtered_ndcg;
  m.echo = preference_echo(p, engine.catalog(), items, engine.embeddings(), engine.provider(), cfg.match_tau);
  for (const auto& q : judge_questions(sim.transcript, engine.catalog().schema())) {
    ++m.questions;
    m.relevant_q += q.relevance ? 1 : 0;
    m.new_q += q.newness ? 1 : 0;
  }
  return m;
}

// Runs every (query type, strategy, ablation) cell over all personas for
// `seeds` seeds. Per seed, metrics are averaged over the cell's personas;
// the report holds mean and sample standard deviation across seeds. Question
// rates are pooled over all questions asked within a seed.
inline SuiteReport run_suite(std::span<const Persona> personas, const Engine& engine, const EngineConfig& base,
                             const SuiteOptions& opt) {
  SuiteReport report;
  report.k = base.top_k;
  report.seeds = opt.seeds;
  report.base_seed = opt.base_seed;
  if (personas.empty()) return report;

  std::vector<std::string> types;
  for (const char* t : {"short", "long"}) {
    for (const auto& p : personas) {
      if (p.query_type == t) {
        types.push_back(t);
        break;
      }
    }
  }
  for (const auto& p : personas) {
    if (std::find(types.begin(), types.end(), p.query_type) == types.end()) types.push_back(p.query_type);
  }

  for (const auto& type : types) {
    std::vector<const Persona*> group;
    for (const auto& p : personas) {
      if (p.query_type == type) group.push_back(&p);
    }
    for (Strategy strategy : opt.strategies) {
      for (const auto& ablation : opt.ablations) {
        const EngineConfig cfg = ablation.apply(base);
        CellReport cell{type, strategy, ablation, group.size(), {}, {}, 0};
        std::map<std::string, std::vector<double>> series;
        std::map<std::string, std::vector<double>> attr_series;

        for (std::size_t s = 0; s < opt.seeds; ++s) {
          const std::uint64_t seed = opt.base_seed + s;
          std::vector<PersonaMetrics> results(group.size());
          std::atomic<std::size_t> next{0};
          auto worker = [&] {
            for (std::size_t i = next++; i < group.size(); i = next++) {
              results[i] = evaluate_persona(*group[i], engine, cfg, strategy, seed, opt.confidence_tau);
            }
          };
          std::vector<std::thread> pool;
          for (std::size_t t = 1; t < std::max<std::size_t>(1, opt.threads); ++t) pool.emplace_back(worker);
          worker();
          for (auto& t : pool) t.join();

          // Reduce in persona order.
          const double n = static_cast<double>(group.size());
          double prec = 0, ndcg = 0, sat = 0, ildv = 0, fprec = 0, fndcg = 0, echo = 0, qs = 0;
          std::size_t questions = 0, relevant = 0, fresh = 0;
          std::map<std::string, RateCounter> attr;
          for (const auto& m : results) {
            prec += m.precision;
            ndcg += m.ndcg;
            sat += m.sat;
            ildv += m.ild;
            fprec += m.filtered_precision;
            fndcg += m.filtered_ndcg;
            echo += m.echo;
            qs += static_cast<double>(m.questions);
            questions += m.questions;
            relevant += m.relevant_q;
            fresh += m.new_q;
            cell.errors += m.error ? 1 : 0;
            count_attr_sat(m.verdicts, attr);
          }
          series["precision"].push_back(prec / n);
          series["ndcg"].push_back(ndcg / n);
          series["sat_count"].push_back(sat / n);
          series["ild"].push_back(ildv / n);
          series["precision_filtered"].push_back(fprec / n);
          series["ndcg_filtered"].push_back(fndcg / n);
          series["preference_echo"].push_back(echo / n);
          series["questions"].push_back(qs / n);
          // No questions asked means nothing to fault.
          series["q_relevance"].push_back(questions ? static_cast<double>(relevant) / static_cast<double>(questions) : 1.0);
          series["q_newness"].push_back(questions ? static_cast<double>(fresh) / static_cast<double>(questions) : 1.0);
          for (const auto& [name, c] : attr) {
            attr_series[name].push_back(static_cast<double>(c.satisfied) / static_cast<double>(c.assessed));
          }
        }
        for (const auto& [name, xs] : series) cell.metrics[name] = summarize_seeds(xs);
        for (const auto& [name, xs] : attr_series) cell.attr_sat[name] = summarize_seeds(xs);
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

namespace eval_detail {

inline std::string fixed(double v, int decimals = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

inline json stat_json(const Stat& s) { return json{{"mean", round6(s.mean)}, {"std", round6(s.stddev)}}; }

inline std::string pm(const Stat& s) { return fixed(s.mean) + " ± " + fixed(s.stddev); }

inline std::string title(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

inline std::string upper(std::string s) {
  for (char& c : s) c = (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
  return s;
}

}  // namespace eval_detail

inline json to_json(const SuiteReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    json metrics = json::object(), attr = json::object();
    for (const auto& [name, s] : c.metrics) metrics[name] = eval_detail::stat_json(s);
    for (const auto& [name, s] : c.attr_sat) attr[name] = eval_detail::stat_json(s);
    cells.push_back({{"query_type", c.query_type},
                     {"strategy", to_string(c.strategy)},
                     {"config", c.ablation.label()},
                     {"personas", c.personas},
                     {"errors", c.errors},
                     {"metrics", std::move(metrics)},
                     {"attr_sat", std::move(attr)}});
  }
  return json{{"k", r.k}, {"seeds", r.seeds}, {"base_seed", r.base_seed}, {"cells", std::move(cells)}};
}

// Two markdown tables: ranking ablations (precision, nDCG, satisfied count,
// ILD) and question ablations (relevance, newness). Question rows come from
// the first strategy's Full and -EntropyQ cells.
inline std::string to_markdown(const SuiteReport& r) {
  using eval_detail::pm;
  std::ostringstream out;
  const std::string k = std::to_string(r.k);
  out << "| Query | Method | Config | Prec@" << k << " | NDCG@" << k << " | Sat@" << k << " | ILD |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const auto& c : r.cells) {
    auto m = [&](const char* name) {
      auto it = c.metrics.find(name);
      return it == c.metrics.end() ? std::string("-") : pm(it->second);
    };
    out << "| " << eval_detail::title(c.query_type) << " | " << eval_detail::upper(to_string(c.strategy)) << " | "
        << c.ablation.label() << " | " << m("precision") << " | " << m("ndcg") << " | " << m("sat_count") << " | "
        << m("ild") << " |\n";
  }

  std::vector<std::string> types;
  for (const auto& c : r.cells) {
    if (std::find(types.begin(), types.end(), c.query_type) == types.end()) types.push_back(c.query_type);
  }
  std::ostringstream q;
  for (const auto& type : types) {
    const CellReport* first = nullptr;
    for (const auto& c : r.cells) {
      if (c.query_type == type) {
        first = &c;
        break;
      }
    }
    for (const auto& [label, ab] : {std::pair{"w/ EntropyQ", Ablation{false, false}},
                                    std::pair{"w/o EntropyQ", Ablation{false, true}}}) {
      const CellReport* c = first ? r.find(type, first->strategy, ab) : nullptr;
      if (!c) continue;
      q << "| " << eval_detail::title(type) << " | " << label << " | " << pm(c->metrics.at("q_relevance")) << " | "
        << pm(c->metrics.at("q_newness")) << " |\n";
    }
  }
  if (!q.str().empty()) {
    out << "\n| Query | Config | Relevance | Newness |\n|---|---|---|---|\n" << q.str();
  }
  return out.str();
}

// Precision, nDCG and ILD for each MMR lambda; a sweep, not an optimizer.
struct SweepPoint {
  double lambda = 0.0;
  Stat precision, ndcg, ild;
};

inline std::vector<SweepPoint> lambda_sweep(std::span<const Persona> personas, const Engine& engine,
                                            const EngineConfig& base, Strategy strategy,
                                            std::span<const double> lambdas, std::size_t seeds,
                                            std::uint64_t base_seed = 0) {
  std::vector<SweepPoint> out;
  for (double lambda : lambdas) {
    EngineConfig cfg = base;
    cfg.mmr_lambda = lambda;
    cfg.validate();
    std::vector<double> p, n, d;
    for (std::size_t s = 0; s < seeds; ++s) {
      double sp = 0, sn = 0, sd = 0;
      for (const auto& persona : personas) {
        const auto m = evaluate_persona(persona, engine, cfg, strategy, base_seed + s, kConfidenceThreshold);
        sp += m.precision;
        sn += m.ndcg;
        sd += m.ild;
      }
      const double cnt = static_cast<double>(std::max<std::size_t>(1, personas.size()));
      p.push_back(sp / cnt);
      n.push_back(sn / cnt);
      d.push_back(sd / cnt);
    }
    out.push_back({lambda, summarize_seeds(p), summarize_seeds(n), summarize_seeds(d)});
  }
  return out;
}

}  // namespace idss

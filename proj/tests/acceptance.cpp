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

// Acceptance run: one [PASS]/[FAIL] line per criterion, with wall time
// against its budget. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

namespace {

using namespace idss;

struct Failure {
  std::string what;
};

#define REQUIRE(cond, msg)                                          \
  do {                                                              \
    if (!(cond)) {                                                  \
      std::ostringstream os_;                                       \
      os_ << __LINE__ << ": " << msg;                               \
      throw Failure{os_.str()};                                     \
    }                                                               \
  } while (0)

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<std::string()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail, error;
  try {
    detail = body();
  } catch (const Failure& f) {
    error = f.what;
  } catch (const std::exception& e) {
    error = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (error.empty() && s > budget_s) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "over time budget (%.2f s > %.0f s)", s, budget_s);
    error = buf;
  }
  std::printf("[%s] %-28s %7.3f s / %.0f s  %s\n", error.empty() ? "PASS" : "FAIL", name, s, budget_s,
              error.empty() ? detail.c_str() : error.c_str());
  std::fflush(stdout);
  failures += error.empty() ? 0 : 1;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// ---------------------------------------------------------------------------

std::string entropy_exactness() {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    ValueDistribution d;
    const int values = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int v = 0; v < values; ++v) {
      const std::size_t c = std::uniform_int_distribution<std::size_t>(0, trial % 2 ? 5 : 1000)(rng);
      d.counts["v" + std::to_string(v)] = c;
      d.total += c;
    }
    long double h = 0.0L;
    std::size_t distinct = 0;
    for (const auto& [_, c] : d.counts) {
      if (c == 0) continue;
      ++distinct;
      const long double p = static_cast<long double>(c) / static_cast<long double>(d.total);
      h -= p * std::log2(p);
    }
    const long double hn = distinct < 2 ? 0.0L : h / std::log2(static_cast<long double>(distinct));
    auto rel = [](double got, long double want) {
      if (want == 0.0L) return std::fabs(got);
      return static_cast<double>(std::fabs((static_cast<long double>(got) - want) / want));
    };
    const double e1 = rel(shannon_entropy(d), h), e2 = rel(normalized_entropy(d), hn);
    worst = std::max({worst, e1, e2});
    REQUIRE(e1 <= 1e-12 && e2 <= 1e-12, "trial " << trial << " relative error " << std::max(e1, e2));
  }
  ValueDistribution ref;
  ref.counts = {{"a", 40}, {"b", 35}, {"c", 25}};
  ref.total = 100;
  REQUIRE(std::fabs(shannon_entropy(ref) - 1.5589) < 5e-5, "H=" << shannon_entropy(ref));
  REQUIRE(std::fabs(normalized_entropy(ref) - 0.9835) < 5e-5, "Hn=" << normalized_entropy(ref));
  return fmt("1000 distributions, worst rel err %.1e; (.40,.35,.25) -> %.4f bits / %.4f", worst,
             shannon_entropy(ref), normalized_entropy(ref));
}

// Random query text describing (part of) a catalog item.
std::string describe_item(const Catalog& c, std::size_t item, std::mt19937_64& rng, double keep) {
  std::vector<std::string> words;
  std::string tail;
  std::bernoulli_distribution take(keep);
  const auto& s = c.schema();
  for (std::size_t d = 0; d < s.size(); ++d) {
    if (!take(rng)) continue;
    const auto& v = c.value(item, d);
    if (const auto* str = std::get_if<std::string>(&v)) {
      words.push_back(*str);
    } else if (const auto* x = std::get_if<double>(&v)) {
      if (s[d].name == "price") tail += " under $" + std::to_string(static_cast<long>(*x + 1000));
      if (s[d].name == "year") tail += ", " + std::to_string(static_cast<long>(*x)) + " or newer";
      if (s[d].name == "mileage") tail += ", under " + std::to_string(static_cast<long>(*x + 5000)) + " miles";
    }
  }
  std::string out = "I'm looking for a";
  for (const auto& w : words) out += " " + w;
  return out + " car" + tail;
}

std::string question_contract() {
  const Engine& e = *testing::car_engine();
  const Catalog& c = e.catalog();
  std::mt19937_64 rng(2);
  std::size_t questions = 0, halts = 0;
  const std::vector<std::string> fillers{"No strong preference on that.", "Any option is fine for that one.", "ok"};
  for (int session = 0; session < 200; ++session) {
    EngineConfig cfg;
    cfg.max_questions = std::uniform_int_distribution<int>(0, 5)(rng);
    SessionState st = e.new_session("s" + std::to_string(session), session % 2 ? Strategy::kCR : Strategy::kES,
                                    cfg.max_questions);
    const std::size_t item = rng() % c.size();
    std::string msg = describe_item(c, item, rng, std::uniform_real_distribution<double>(0.0, 0.7)(rng));
    for (int turn = 0; turn < 8 && st.phase != Phase::kDone; ++turn) {
      const std::set<std::string> asked_before(st.asked_dimensions.begin(), st.asked_dimensions.end());
      const TurnResult r = e.advance_turn(st, msg, cfg);
      const std::set<std::string> spec = st.filters.dimensions();
      double best = -1.0;
      std::string best_dim;
      for (const auto& d : r.entropy.dimensions) {
        if (spec.count(d.dimension) || asked_before.count(d.dimension)) continue;
        if (d.normalized_entropy > best) {
          best = d.normalized_entropy;
          best_dim = d.dimension;
        }
      }
      REQUIRE(r.candidate_count == scan(c, [&] {
                FilterSet f = st.filters;
                for (const auto& dim : st.relaxed_dimensions) f.entries.erase(dim);
                return f;
              }()).size(),
              "candidate set differs from a direct scan");
      if (r.question) {
        ++questions;
        const std::string& q = r.question->dimension;
        REQUIRE(!spec.count(q), "session " << session << " asked specified dimension " << q);
        REQUIRE(!asked_before.count(q), "session " << session << " re-asked " << q);
        REQUIRE(r.entropy.find(q)->normalized_entropy >= 0.3, "asked " << q << " below threshold");
        REQUIRE(r.entropy.find(q)->normalized_entropy == best, "asked " << q << " but argmax is " << best_dim);
        const std::size_t d = c.schema().require(q);
        std::string answer = fillers[rng() % fillers.size()];
        if (std::bernoulli_distribution(0.6)(rng)) {
          const auto& v = c.value(item, d);
          if (const auto* s = std::get_if<std::string>(&v)) answer = "I'd like " + *s + ".";
          if (const auto* x = std::get_if<double>(&v)) answer = std::to_string(static_cast<long>(*x));
        }
        msg = answer;
      } else {
        ++halts;
        REQUIRE(st.questions_asked() <= static_cast<std::size_t>(cfg.max_questions), "too many questions");
        if (st.patience == Patience::kPatient && static_cast<int>(st.questions_asked()) < cfg.max_questions) {
          REQUIRE(best < 0.3, "session " << session << " stopped with " << best_dim << " at " << best);
        }
      }
    }
    REQUIRE(st.phase == Phase::kDone, "session " << session << " never finished");
  }
  return fmt("200 sessions, %.0f questions, %.0f halts", static_cast<double>(questions), static_cast<double>(halts));
}

// Greedy recursion evaluated from scratch at every step.
std::vector<std::size_t> mmr_oracle(const std::vector<double>& q, const std::vector<std::vector<double>>& sim,
                                    std::size_t k, double lambda) {
  std::vector<std::size_t> chosen;
  while (chosen.size() < std::min(k, q.size())) {
    std::size_t best = q.size();
    double best_score = -1e300;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      double red = 0.0;
      for (std::size_t j = 0; j < chosen.size(); ++j) red = j == 0 ? sim[i][chosen[j]] : std::max(red, sim[i][chosen[j]]);
      const double score = lambda * q[i] - (1.0 - lambda) * red;
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

std::string mmr_correctness() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::size_t cases = 0;
  for (int fixture = 0; fixture < 4000; ++fixture) {
    std::vector<double> q(5);
    for (auto& x : q) x = u(rng);
    std::vector<std::vector<double>> sim(5, std::vector<double>(5, 1.0));
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = i + 1; j < 5; ++j) sim[i][j] = sim[j][i] = u(rng);
    }
    auto pair = [&](std::size_t a, std::size_t b) { return sim[a][b]; };
    for (std::size_t k = 1; k <= 3; ++k) {
      for (double lambda : {0.1, 0.3, 0.5, 0.7, 0.85, 1.0}) {
        std::vector<std::size_t> got;
        for (const auto& c : mmr_select(std::span<const double>(q), pair, k, lambda)) got.push_back(c.item);
        REQUIRE(got == mmr_oracle(q, sim, k, lambda), "fixture " << fixture << " k=" << k << " lambda=" << lambda);
        ++cases;
      }
      std::vector<std::size_t> order{0, 1, 2, 3, 4};
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return q[a] > q[b]; });
      order.resize(k);
      std::vector<std::size_t> got;
      for (const auto& c : mmr_select(std::span<const double>(q), pair, k, 1.0)) got.push_back(c.item);
      REQUIRE(got == order, "lambda=1 is not a similarity sort");
    }
  }
  return fmt("%.0f fixture/K/lambda cases match; lambda=1 equals similarity sort", static_cast<double>(cases));
}

AlignmentTable random_table(std::mt19937_64& rng, std::size_t items, std::size_t liked) {
  AlignmentTable t;
  t.candidates = items;
  std::uniform_real_distribution<double> cos(-0.2, 1.0);
  for (std::size_t j = 0; j < liked; ++j) {
    auto& row = t.pos.emplace_back(items);
    for (auto& x : row) x = match_threshold(cos(rng), 0.6);
  }
  return t;
}

std::string coverage_bound() {
  std::mt19937_64 rng(4);
  const double ratio = 1.0 - 1.0 / std::exp(1.0);
  double worst = 1.0;
  int instances = 0;
  for (; instances < 2000; ++instances) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const std::size_t f = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const AlignmentTable t = random_table(rng, n, f);
    std::vector<std::size_t> greedy;
    for (const auto& c : coverage_risk_greedy(t, k, 0.0)) greedy.push_back(c.item);
    const double g = coverage_risk_objective(t, greedy, 0.0);
    double opt = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) > k) continue;
      double cov = 0.0;
      for (std::size_t j = 0; j < f; ++j) {
        double m = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
          if (mask >> v & 1u) m = std::max(m, t.pos[j][v]);
        }
        cov += m;
      }
      opt = std::max(opt, cov);
    }
    REQUIRE(g >= ratio * opt - 1e-12, "instance " << instances << ": greedy " << g << " < (1-1/e)*" << opt);
    if (opt > 0) worst = std::min(worst, g / opt);
  }
  return fmt("%.0f instances, worst greedy/OPT %.4f (bound %.4f)", instances, worst, ratio);
}

std::string submodularity() {
  std::mt19937_64 rng(5);
  std::size_t checks = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
    const AlignmentTable t = random_table(rng, n, std::uniform_int_distribution<std::size_t>(1, 4)(rng));
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::size_t v = perm.back();
    const std::size_t tsize = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const std::size_t ssize = std::uniform_int_distribution<std::size_t>(0, tsize)(rng);
    CoverageRiskState s(t), big(t);
    for (std::size_t i = 0; i < tsize; ++i) {
      if (i < ssize) s.add(perm[i]);
      big.add(perm[i]);
    }
    auto oracle = [&](std::size_t upto) {
      double gain = 0.0;
      for (const auto& row : t.pos) {
        double m = 0.0;
        for (std::size_t i = 0; i < upto; ++i) m = std::max(m, row[perm[i]]);
        gain += std::max(0.0, row[v] - m);
      }
      return gain;
    };
    REQUIRE(s.delta_coverage(v) == oracle(ssize) && big.delta_coverage(v) == oracle(tsize), "delta mismatch");
    REQUIRE(s.delta_coverage(v) >= big.delta_coverage(v), "trial " << trial << " violates diminishing returns");
    ++checks;
  }
  return fmt("%.0f (S subset T, v) triples", static_cast<double>(checks));
}

std::string metric_oracles() {
  const std::vector<int> r01{0, 1};
  REQUIRE(std::fabs(ndcg_at_k(r01, 2) - 0.6309) < 5e-5, "nDCG(0,1)@2 = " << ndcg_at_k(r01, 2));
  REQUIRE(precision_at_k(r01, 2) == 0.5, "P(0,1)@2");
  const std::vector<int> r{1, 1, 0, 1, 0, 0, 0, 1, 0};
  // DCG = 1 + 1/log2 3 + 1/log2 5 + 1/log2 9; IDCG = 1 + 1/log2 3 + 1/log2 4 + 1/log2 5.
  const double dcg = 1 + 1 / std::log2(3.0) + 1 / std::log2(5.0) + 1 / std::log2(9.0);
  const double idcg = 1 + 1 / std::log2(3.0) + 1 / std::log2(4.0) + 1 / std::log2(5.0);
  REQUIRE(std::fabs(ndcg_at_k(r, 9) - dcg / idcg) < 1e-12, "nDCG@9");
  REQUIRE(precision_at_k(r, 9) == 4.0 / 9.0, "P@9");
  REQUIRE(satisfied_count_at_k(r, 9) == 4, "Sat@9");

  const Catalog c = testing::toy_catalog();
  Persona p;
  p.persona_id = "m";
  p.hard_constraints.set("body", Equals{"SUV"});
  p.hard_constraints.set("price", Range{std::nullopt, 30000.0});
  std::vector<JudgeVerdict> vs;
  for (const char* id : {"t1", "t2", "t3", "t6"}) vs.push_back(judge(p, c, *c.find(id)));
  // body: t1 t2 t6 satisfy (3/4); price: t1 t3 satisfy (2/4).
  const auto rates = attr_sat_rate(vs);
  REQUIRE(rates.at("body") == 0.75 && rates.at("price") == 0.5 && rates.size() == 2, "AttrSat");
  REQUIRE(vs[1].confidence == 0.5, "judge confidence for a $31K SUV");

  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 9)(rng);
    std::vector<Vector> vecs;
    std::vector<std::vector<double>> raw;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> x(16);
      for (auto& v : x) v = g(rng);
      raw.push_back(x);
      vecs.emplace_back(x);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dot = 0, a = 0, b = 0;
        for (std::size_t k = 0; k < 16; ++k) {
          dot += raw[i][k] * raw[j][k];
          a += raw[i][k] * raw[i][k];
          b += raw[j][k] * raw[j][k];
        }
        sum += std::min(1.0, std::max(0.0, 1.0 - dot / std::sqrt(a * b)));
      }
    }
    const double want = sum / (static_cast<double>(n * (n - 1)) / 2.0);
    worst = std::max(worst, std::fabs(ild(vecs) - want));
    REQUIRE(std::fabs(ild(vecs) - want) <= 1e-12, "ILD trial " << trial);
  }
  return fmt("nDCG(0,1)@2 = %.4f; ILD worst abs err %.1e", ndcg_at_k(r01, 2), worst);
}

struct SuiteRun {
  SuiteReport report;
  std::string json_text;
  std::string markdown;
};

SuiteRun run_full_suite() {
  SuiteOptions opt;
  opt.seeds = 3;
  opt.base_seed = 0;
  SuiteRun r;
  r.report = run_suite(testing::personas(), *testing::car_engine(), EngineConfig{}, opt);
  r.json_text = to_json(r.report).dump(2);
  r.markdown = to_markdown(r.report);
  return r;
}

SuiteRun first_run;

double persona_weighted(const SuiteReport& r, Strategy s, const Ablation& a, const char* metric) {
  double sum = 0.0, n = 0.0;
  for (const auto& c : r.cells) {
    if (c.strategy != s || !(c.ablation == a)) continue;
    sum += c.metrics.at(metric).mean * static_cast<double>(c.personas);
    n += static_cast<double>(c.personas);
  }
  return sum / n;
}

std::string ablation_direction() {
  first_run = run_full_suite();
  const SuiteReport& r = first_run.report;
  REQUIRE(testing::personas().size() == 50, "persona suite size");
  for (const auto& c : r.cells) REQUIRE(c.errors == 0, c.query_type << " " << c.ablation.label() << " had errors");
  std::string out;
  const Ablation full{false, false}, no_mmr{true, false}, no_q{false, true};
  for (Strategy s : {Strategy::kES, Strategy::kCR}) {
    const double a = persona_weighted(r, s, full, "ild"), b = persona_weighted(r, s, no_mmr, "ild");
    REQUIRE(a > b, to_string(s) << ": ILD Full " << a << " <= -MMR " << b);
    const double na = r.find("short", s, full)->metrics.at("q_newness").mean;
    const double nb = r.find("short", s, no_q)->metrics.at("q_newness").mean;
    REQUIRE(na >= nb, to_string(s) << ": short newness " << na << " < fixed order " << nb);
    out += to_string(s) + fmt(": ILD %.3f > %.3f, short newness %.3f >= %.3f; ", a, b, na, nb);
  }
  return out;
}

std::string edge_cases() {
  const Engine& e = *testing::car_engine();
  const Catalog& c = e.catalog();
  std::mt19937_64 rng(8);
  int zero = 0, attempts = 0;
  while (zero < 100 && attempts < 5000) {
    ++attempts;
    // Attribute values drawn from three different items rarely co-occur.
    std::string msg = "I want a";
    for (const char* dim : {"exterior_color", "make", "fuel", "body"}) {
      const auto& vocab = c.vocabulary(c.schema().require(dim));
      msg += " " + vocab[rng() % vocab.size()];
    }
    msg += " from " + std::to_string(2010 + rng() % 15) + " or newer under $" + std::to_string(5000 + rng() % 20000);
    const int k = static_cast<int>(rng() % 3);
    SessionState st = e.new_session("z", Strategy::kES, k);
    TurnResult r = e.advance_turn(st, msg, EngineConfig{});
    if (!apply_filters(c, st.filters).empty()) continue;
    ++zero;
    REQUIRE(!r.relaxed.empty(), "zero-result turn without relaxed dimensions: " << msg);
    while (r.type == TurnResult::Type::kQuestion) r = e.advance_turn(st, "No strong preference on that.", EngineConfig{});
    REQUIRE(r.grid && r.grid->item_count() > 0, "empty grid for " << msg);
    REQUIRE(!r.relaxed.empty() && r.relaxed == st.relaxed_dimensions, "relaxed dimensions not disclosed: " << msg);
    for (const auto& d : r.relaxed) REQUIRE(st.filters.contains(d), "relaxed an inactive filter " << d);
    REQUIRE(to_json(r)["relaxed"].size() == r.relaxed.size(), "relaxed missing from payload");
    REQUIRE(st.history.back().text.find("relaxed") != std::string::npos, "relaxation note missing");
  }
  REQUIRE(zero >= 100, "only " << zero << " zero-result queries generated");

  // Impatience mid-interview, at a random point.
  int impatient_sessions = 0;
  for (int i = 0; i < 100; ++i) {
    EngineConfig cfg;
    cfg.max_questions = 5;
    SessionState st = e.new_session("i", Strategy::kCR, 5);
    const int signal_at = static_cast<int>(rng() % 3);
    std::string msg = "I want a car";
    for (int turn = 0; turn <= signal_at && st.phase != Phase::kDone; ++turn) {
      if (turn == signal_at) msg += i % 2 ? kImpatientSuffix : " whatever, just show me options";
      const TurnResult r = e.advance_turn(st, msg, cfg);
      if (turn == signal_at) {
        REQUIRE(r.type == TurnResult::Type::kRecommendations && r.grid->item_count() > 0,
                "no recommendations right after impatience (" << msg << ")");
        ++impatient_sessions;
      }
      msg = "No strong preference on that.";
    }
  }
  // Impatient personas through the simulator.
  int personas = 0;
  for (const auto& p : testing::personas()) {
    if (p.style != Patience::kImpatient) continue;
    ++personas;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      EngineConfig cfg;
      cfg.max_questions = 5;
      const auto sim = simulate(p, e, cfg, Strategy::kES, seed);
      REQUIRE(sim.grid && !sim.error, p.persona_id << " got no grid");
      std::size_t signal = sim.transcript.size();
      for (std::size_t t = 0; t < sim.transcript.size(); ++t) {
        const auto& rec = sim.transcript[t];
        if (rec.speaker != "user") continue;
        const auto prior = std::span<const TurnRecord>(sim.transcript).first(t);
        if (e.parser().parse(rec.text, e.schema_summary(), prior).patience == Patience::kImpatient) {
          signal = t;
          break;
        }
      }
      REQUIRE(signal + 2 == sim.transcript.size(), p.persona_id << " seed " << seed << ": turns continued after impatience");
      REQUIRE(!sim.transcript.back().dimension, p.persona_id << ": last agent turn is a question");
    }
  }
  return fmt("%.0f zero-result queries relaxed and disclosed; %.0f impatient sessions and %.0f personas x 3 seeds",
             zero, impatient_sessions, personas);
}

std::string determinism() {
  const SuiteRun again = run_full_suite();
  REQUIRE(!first_run.json_text.empty(), "first run missing");
  REQUIRE(again.json_text == first_run.json_text, "JSON reports differ");
  REQUIRE(again.markdown == first_run.markdown, "markdown reports differ");
  return fmt("two runs byte-identical (%.0f bytes JSON, %.0f bytes markdown)",
             static_cast<double>(again.json_text.size()), static_cast<double>(again.markdown.size()));
}

}  // namespace

int main() {
  std::printf("acceptance: %s\n", IDSS_DATA_DIR);
  criterion("entropy exactness", 1, entropy_exactness);
  criterion("question-selection contract", 10, question_contract);
  criterion("MMR correctness", 5, mmr_correctness);
  criterion("coverage greedy bound", 30, coverage_bound);
  criterion("submodularity", 10, submodularity);
  criterion("metric oracles", 1, metric_oracles);
  criterion("ablation direction", 120, ablation_direction);
  criterion("edge cases", 30, edge_cases);
  criterion("determinism", 120, determinism);
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}

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

// Free text to (filter delta, liked/disliked phrases, patience). The parser is
// an interface; RuleBasedParser is the deterministic keyword implementation.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idss/catalog.hpp"
#include "idss/text.hpp"

namespace idss {

// ---------------------------------------------------------------------------
// Schema summary handed to parsers

struct DimensionSummary {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;
  std::string unit;
  std::string question_label;
  std::vector<std::string> values;  // categorical vocabulary
  std::map<std::string, std::string> synonyms;
};

struct SchemaSummary {
  std::vector<DimensionSummary> dimensions;

  const DimensionSummary* find(std::string_view name) const {
    for (const auto& d : dimensions) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }
};

inline SchemaSummary summarize(const Catalog& catalog) {
  SchemaSummary out;
  for (std::size_t d = 0; d < catalog.schema().size(); ++d) {
    const auto& a = catalog.schema()[d];
    DimensionSummary s{a.name, a.kind, a.unit, a.label(), {}, a.synonyms};
    if (!a.continuous()) s.values = catalog.vocabulary(d);
    out.dimensions.push_back(std::move(s));
  }
  return out;
}

inline json to_json(const SchemaSummary& s) {
  json dims = json::array();
  for (const auto& d : s.dimensions) {
    json j{{"name", d.name}, {"kind", to_string(d.kind)}, {"question_label", d.question_label}};
    if (!d.unit.empty()) j["unit"] = d.unit;
    if (!d.values.empty()) j["values"] = d.values;
    if (!d.synonyms.empty()) j["synonyms"] = d.synonyms;
    dims.push_back(std::move(j));
  }
  return json{{"dimensions", std::move(dims)}};
}

// ---------------------------------------------------------------------------
// Turn records and parse results

enum class Patience { kPatient, kImpatient };

inline std::string to_string(Patience p) { return p == Patience::kImpatient ? "impatient" : "patient"; }

inline Patience patience_from_string(std::string_view s) {
  if (s == "patient") return Patience::kPatient;
  if (s == "impatient") return Patience::kImpatient;
  throw ContractError("unknown patience '" + std::string(s) + "'");
}

struct TurnRecord {
  std::string speaker;  // "user" or "agent"
  std::string text;
  FilterSet delta;                       // user turns
  std::optional<std::string> dimension;  // agent questions

  bool operator==(const TurnRecord&) const = default;
};

inline json to_json(const TurnRecord& t) {
  json j{{"speaker", t.speaker}, {"text", t.text}};
  if (!t.delta.empty()) j["delta"] = filters_to_json(t.delta);
  if (t.dimension) j["dimension"] = *t.dimension;
  return j;
}

inline TurnRecord turn_from_json(const json& j) {
  TurnRecord t;
  t.speaker = j.at("speaker").get<std::string>();
  t.text = j.value("text", "");
  if (j.contains("delta")) t.delta = filters_from_json(j.at("delta"));
  if (j.contains("dimension")) t.dimension = j.at("dimension").get<std::string>();
  return t;
}

struct ParsedTurn {
  FilterSet filter_delta;
  std::vector<std::string> liked;
  std::vector<std::string> disliked;
  Patience patience = Patience::kPatient;

  bool operator==(const ParsedTurn&) const = default;
};

inline json to_json(const ParsedTurn& p) {
  return json{{"filters", filters_to_json(p.filter_delta)},
              {"liked", p.liked},
              {"disliked", p.disliked},
              {"patience", to_string(p.patience)}};
}

inline ParsedTurn parsed_turn_from_json(const json& j) {
  ParsedTurn p;
  if (j.contains("filters")) p.filter_delta = filters_from_json(j.at("filters"));
  if (j.contains("liked")) p.liked = j.at("liked").get<std::vector<std::string>>();
  if (j.contains("disliked")) p.disliked = j.at("disliked").get<std::vector<std::string>>();
  if (j.contains("patience")) p.patience = patience_from_string(j.at("patience").get<std::string>());
  for (const auto& s : p.liked) {
    if (s.empty()) throw ContractError("ParsedTurn: empty liked phrase");
  }
  for (const auto& s : p.disliked) {
    if (s.empty()) throw ContractError("ParsedTurn: empty disliked phrase");
  }
  return p;
}

// Delta wins per dimension; predicates are replaced, never intersected.
inline FilterSet merge_filters(const FilterSet& existing, const FilterSet& delta) {
  FilterSet out = existing;
  for (const auto& [dim, pred] : delta.entries) out.set(dim, pred);
  return out;
}

// Appends phrases not already present (exact match).
inline void merge_phrases(std::vector<std::string>& into, const std::vector<std::string>& add) {
  for (const auto& p : add) {
    if (std::find(into.begin(), into.end(), p) == into.end()) into.push_back(p);
  }
}

inline bool detect_impatience(const ParsedTurn& p) { return p.patience == Patience::kImpatient; }

class ParserAdapter {
 public:
  virtual ~ParserAdapter() = default;
  virtual ParsedTurn parse(std::string_view text, const SchemaSummary& schema,
                           std::span<const TurnRecord> history) const = 0;
};

// Agent question awaiting an answer, if the last record is one.
inline std::optional<std::string> pending_dimension(std::span<const TurnRecord> history) {
  if (history.empty() || history.back().speaker != "agent") return std::nullopt;
  return history.back().dimension;
}

// ---------------------------------------------------------------------------
// Rule-based parser

namespace parse_detail {

enum class TokenKind { kWord, kNumber, kSeparator };

struct Token {
  TokenKind kind = TokenKind::kWord;
  std::string norm;  // lower-cased word, apostrophes dropped
  double value = 0.0;
  bool currency = false;
  bool thousands = false;  // "k" suffix
  std::size_t begin = 0;
  std::size_t end = 0;
};

inline bool is_separator(char c) { return c == ',' || c == '.' || c == ';' || c == '!' || c == '?' || c == ':'; }

// Words, numbers ("$30k", "12,500", "2.5k") and clause separators.
inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  auto is_apostrophe = [&](std::size_t p) {
    return p < n && (s[p] == '\'' ||
                     (p + 2 < n && static_cast<unsigned char>(s[p]) == 0xE2 &&
                      static_cast<unsigned char>(s[p + 1]) == 0x80 && static_cast<unsigned char>(s[p + 2]) == 0x99));
  };
  auto apostrophe_len = [&](std::size_t p) -> std::size_t { return s[p] == '\'' ? 1 : 3; };

  while (i < n) {
    const char c = s[i];
    const bool dollar = c == '$' && i + 1 < n && text::is_digit(s[i + 1]);
    if (dollar || text::is_digit(c)) {
      // Try a numeric literal; fall back to a word for things like "4wd".
      std::size_t j = dollar ? i + 1 : i;
      std::string digits;
      while (j < n && (text::is_digit(s[j]) ||
                       (s[j] == ',' && !digits.empty() && j + 1 < n && text::is_digit(s[j + 1])) ||
                       (s[j] == '.' && j + 1 < n && text::is_digit(s[j + 1])))) {
        if (s[j] != ',') digits.push_back(s[j]);
        ++j;
      }
      bool k = false;
      if (j < n && (s[j] == 'k' || s[j] == 'K') && (j + 1 >= n || !text::is_alnum(s[j + 1]))) {
        k = true;
        ++j;
      }
      if (j >= n || !text::is_alpha(s[j])) {
        Token t;
        t.kind = TokenKind::kNumber;
        t.value = std::stod(digits) * (k ? 1000.0 : 1.0);
        t.currency = dollar;
        t.thousands = k;
        t.begin = i;
        t.end = j;
        t.norm = digits;
        out.push_back(std::move(t));
        i = j;
        continue;
      }
    }
    if (text::is_alnum(c)) {
      Token t;
      t.begin = i;
      while (i < n) {
        if (text::is_alnum(s[i])) {
          t.norm.push_back(text::to_lower(s[i]));
          ++i;
        } else if (is_apostrophe(i) && i + apostrophe_len(i) < n && text::is_alpha(s[i + apostrophe_len(i)])) {
          i += apostrophe_len(i);
        } else {
          break;
        }
      }
      t.end = i;
      out.push_back(std::move(t));
      continue;
    }
    if (is_separator(c)) {
      Token t;
      t.kind = TokenKind::kSeparator;
      t.norm = std::string(1, c);
      t.begin = i;
      t.end = i + 1;
      out.push_back(std::move(t));
    }
    ++i;
  }
  return out;
}

using Phrase = std::vector<std::string>;

inline Phrase words(std::string_view s) { return text::alnum_tokens(s); }

// Length of `p` if it matches word tokens at `i`, else 0.
inline std::size_t match_at(const std::vector<Token>& toks, std::size_t i, const Phrase& p) {
  if (p.empty() || i + p.size() > toks.size()) return 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (toks[i + k].kind != TokenKind::kWord || toks[i + k].norm != p[k]) return 0;
  }
  return p.size();
}

inline std::size_t longest_match(const std::vector<Token>& toks, std::size_t i, const std::vector<Phrase>& ps) {
  std::size_t best = 0;
  for (const auto& p : ps) best = std::max(best, match_at(toks, i, p));
  return best;
}

inline bool contains_phrase(const std::vector<Token>& toks, const std::vector<Phrase>& ps) {
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (longest_match(toks, i, ps) > 0) return true;
  }
  return false;
}

inline std::vector<Phrase> phrases(std::initializer_list<const char*> list) {
  std::vector<Phrase> out;
  for (const char* s : list) out.push_back(words(s));
  return out;
}

inline const std::vector<Phrase>& skip_phrases() {
  static const auto p = phrases({"just show", "show me what", "show me something", "show me the", "show me some",
                                 "skip", "whatever", "enough questions", "no more questions", "stop asking",
                                 "i dont care", "dont care", "just give me"});
  return p;
}

inline const std::vector<Phrase>& disliked_triggers() {
  static const auto p = phrases({"hate", "hates", "avoid", "dislike", "dont want", "do not want", "dont like",
                                 "do not like", "not a fan of", "cant stand", "cannot stand", "can not stand",
                                 "without", "never", "no", "worried about", "rather not have"});
  return p;
}

inline const std::vector<Phrase>& liked_triggers() {
  static const auto p = phrases({"love", "loves", "want", "wants", "need", "needs", "looking for", "like", "prefer",
                                 "must have", "care about", "enjoy", "would like"});
  return p;
}

// "no" followed by one of these is not a dislike ("no more than", "no strong preference").
inline const std::set<std::string>& no_exceptions() {
  static const std::set<std::string> s{"more",  "less",       "strong",      "preference", "preferences",
                                       "real",  "particular", "problem",     "idea",       "need",
                                       "rush",  "matter",     "requirement", "requirements"};
  return s;
}

inline const std::set<std::string>& span_breakers() {
  static const std::set<std::string> s{"but", "though", "although", "however", "because", "since", "except"};
  return s;
}

inline const std::set<std::string>& conjunctions() {
  static const std::set<std::string> s{"and", "or", "plus", "also", "nor"};
  return s;
}

// Trimmed from the ends of a preference phrase.
inline const std::set<std::string>& edge_stopwords() {
  static const std::set<std::string> s{
      "a",        "an",          "the",     "with",      "for",       "to",       "some",     "something",
      "anything", "car",         "cars",    "vehicle",   "vehicles",  "one",      "ones",     "option",
      "options",  "preference",  "preferences", "particular", "idea", "there",    "that",     "it",
      "this",     "really",      "much",    "please",    "i",         "im",       "id",       "ive",
      "my",       "me",          "we",      "our",       "is",        "be",       "are",      "would",
      "will",     "should",      "stay",    "very",      "so",        "just",     "of",       "on",
      "in",       "at",          "have",    "has",       "get",       "if",       "possible", "ideally",
      "preferably", "definitely", "lot",    "lots",      "kind",      "sort",     "model",    "models",
      "any",      "too",         "as",      "well",      "who",       "which",    "what"};
  return s;
}

inline const std::vector<Phrase>& upper_words() {
  static const auto p = phrases({"under", "below", "less than", "max", "maximum", "up to", "at most",
                                 "no more than", "not more than", "within", "around", "about", "cheaper than",
                                 "lower than", "older than", "before", "tops", "budget of", "budget is"});
  return p;
}

inline const std::vector<Phrase>& lower_words() {
  static const auto p = phrases({"over", "above", "more than", "at least", "min", "minimum", "newer than",
                                 "after", "from", "since", "higher than", "starting at"});
  return p;
}

inline const std::vector<Phrase>& upper_suffix() {
  static const auto p = phrases({"or less", "or under", "or below", "or cheaper", "or older", "max", "tops",
                                 "or lower", "at most"});
  return p;
}

inline const std::vector<Phrase>& lower_suffix() {
  static const auto p = phrases({"or newer", "or later", "or more", "or above", "or over", "and up", "plus",
                                 "and newer", "and above", "or higher", "minimum"});
  return p;
}

inline const std::set<std::string>& currency_cues() {
  static const std::set<std::string> s{"budget", "price", "cost", "costs", "pay", "spend", "afford",
                                       "cheaper", "dollars", "bucks", "usd", "priced"};
  return s;
}

inline const std::set<std::string>& mileage_cues() {
  static const std::set<std::string> s{"miles", "mi", "mile", "mileage", "odometer"};
  return s;
}

inline const std::set<std::string>& year_cues() {
  static const std::set<std::string> s{"year", "newer", "older", "later", "earlier", "model"};
  return s;
}

inline bool is_currency_unit(std::string_view unit) {
  const std::string u = text::lower(unit);
  return u == "usd" || u == "$" || u == "dollars" || u == "eur" || u == "gbp";
}

inline bool is_distance_unit(std::string_view unit) {
  const std::string u = text::lower(unit);
  return u == "miles" || u == "mi" || u == "km" || u == "kilometers";
}

struct Alias {
  Phrase tokens;
  std::string dimension;
  std::string value;
};

inline std::vector<Alias> build_aliases(const SchemaSummary& schema) {
  std::vector<Alias> out;
  for (const auto& d : schema.dimensions) {
    if (d.kind != AttributeKind::kCategorical) continue;
    for (const auto& v : d.values) {
      Phrase p = words(v);
      if (p.empty()) continue;
      out.push_back({p, d.name, v});
      Phrase plural = p;
      if (plural.back().back() != 's' && !text::is_digit(plural.back().back())) {
        plural.back() += "s";
        out.push_back({plural, d.name, v});
      }
    }
    for (const auto& [alias, canonical] : d.synonyms) {
      if (std::find(d.values.begin(), d.values.end(), canonical) == d.values.end()) continue;
      Phrase p = words(alias);
      if (!p.empty()) out.push_back({p, d.name, canonical});
    }
  }
  return out;
}

// Words that name a dimension ("interior", "exterior", "fuel"), used to
// resolve values shared by several dimensions.
inline std::set<std::string> cue_words(const DimensionSummary& d) {
  std::set<std::string> out;
  for (const auto& w : words(d.name)) out.insert(w);
  for (const auto& w : words(d.question_label)) out.insert(w);
  return out;
}

struct Trigger {
  std::size_t pos = 0;
  std::size_t len = 0;
  int polarity = 0;  // +1 liked, -1 disliked
};

inline std::vector<Trigger> find_triggers(const std::vector<Token>& toks) {
  std::vector<Trigger> out;
  for (std::size_t i = 0; i < toks.size();) {
    if (toks[i].kind != TokenKind::kWord) {
      ++i;
      continue;
    }
    std::size_t len = longest_match(toks, i, disliked_triggers());
    if (len == 1 && toks[i].norm == "no" && i + 1 < toks.size() && no_exceptions().count(toks[i + 1].norm)) len = 0;
    if (len > 0) {
      out.push_back({i, len, -1});
      i += len;
      continue;
    }
    len = longest_match(toks, i, liked_triggers());
    if (len > 0) {
      out.push_back({i, len, +1});
      i += len;
      continue;
    }
    ++i;
  }
  return out;
}

}  // namespace parse_detail

// Deterministic keyword/pattern parser. Rules, in order:
//  - skip phrases ("just show me", "whatever", "skip") mark the turn
//    impatient, as does a reply of at most two tokens to a pending question
//    that carries no constraint or preference;
//  - "love/want/need/looking for/..." open a liked span and
//    "hate/avoid/no/don't want/..." a disliked span, each running to the next
//    clause separator, "but", or trigger;
//  - catalog values and their synonyms become equals (one_of when several
//    values of a dimension are named), except inside disliked spans;
//  - numbers become range bounds on price (currency), mileage (distance
//    unit), year (four-digit model years), else the pending continuous
//    question, else price for amounts >= 1000; "under/over/between/or newer"
//    set the bound side, inverted inside disliked spans;
//  - span words not consumed by a filter form the liked/disliked phrases,
//    split at conjunctions and kept verbatim.
class RuleBasedParser final : public ParserAdapter {
 public:
  ParsedTurn parse(std::string_view text, const SchemaSummary& schema,
                   std::span<const TurnRecord> history) const override {
    using namespace parse_detail;
    ParsedTurn out;
    const auto toks = tokenize(text);
    const std::size_t n = toks.size();
    if (n == 0) return out;

    std::vector<int> polarity(n, 0);
    std::vector<bool> consumed(n, false);
    std::vector<bool> trigger_tok(n, false);

    // Preference spans.
    const auto triggers = find_triggers(toks);
    for (std::size_t t = 0; t < triggers.size(); ++t) {
      const auto& tr = triggers[t];
      for (std::size_t k = tr.pos; k < tr.pos + tr.len; ++k) trigger_tok[k] = true;
      const std::size_t limit = t + 1 < triggers.size() ? triggers[t + 1].pos : n;
      for (std::size_t k = tr.pos + tr.len; k < limit; ++k) {
        if (toks[k].kind == TokenKind::kSeparator || span_breakers().count(toks[k].norm)) break;
        polarity[k] = tr.polarity;
      }
    }

    const auto pending = pending_dimension(history);
    extract_categorical(toks, schema, pending, polarity, consumed, out.filter_delta);
    extract_numeric(toks, schema, pending, polarity, consumed, out.filter_delta);

    // Phrases: maximal runs of unconsumed span words, split at conjunctions,
    // edges trimmed.
    std::size_t i = 0;
    while (i < n) {
      if (polarity[i] == 0 || consumed[i] || trigger_tok[i] || toks[i].kind != TokenKind::kWord ||
          conjunctions().count(toks[i].norm)) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < n && polarity[j] == polarity[i] && !consumed[j] && !trigger_tok[j] &&
             toks[j].kind == TokenKind::kWord && !conjunctions().count(toks[j].norm)) {
        ++j;
      }
      std::size_t a = i, b = j;
      while (a < b && edge_stopwords().count(toks[a].norm)) ++a;
      while (b > a && edge_stopwords().count(toks[b - 1].norm)) --b;
      if (a < b) {
        std::string phrase(text.substr(toks[a].begin, toks[b - 1].end - toks[a].begin));
        merge_phrases(polarity[i] > 0 ? out.liked : out.disliked, {phrase});
      }
      i = j;
    }

    std::size_t content = 0;
    for (const auto& t : toks) content += t.kind == TokenKind::kSeparator ? 0 : 1;
    const bool terse = pending && content <= 2 && out.filter_delta.empty() && out.liked.empty() &&
                       out.disliked.empty();
    if (contains_phrase(toks, skip_phrases()) || terse) out.patience = Patience::kImpatient;
    return out;
  }

 private:
  static void extract_categorical(const std::vector<parse_detail::Token>& toks, const SchemaSummary& schema,
                                  const std::optional<std::string>& pending, const std::vector<int>& polarity,
                                  std::vector<bool>& consumed, FilterSet& delta) {
    using namespace parse_detail;
    const auto aliases = build_aliases(schema);
    std::map<std::string, std::set<std::string>> picked;
    std::vector<std::string> order;  // dimensions in first-mention order

    for (std::size_t i = 0; i < toks.size();) {
      if (consumed[i] || toks[i].kind != TokenKind::kWord || polarity[i] < 0) {
        ++i;
        continue;
      }
      std::size_t best = 0;
      for (const auto& a : aliases) best = std::max(best, match_at(toks, i, a.tokens));
      if (best == 0) {
        ++i;
        continue;
      }
      // Every dimension this surface form could mean, in schema order.
      std::vector<const Alias*> hits;
      for (const auto& a : aliases) {
        if (a.tokens.size() == best && match_at(toks, i, a.tokens)) {
          bool dup = false;
          for (const auto* h : hits) dup = dup || h->dimension == a.dimension;
          if (!dup) hits.push_back(&a);
        }
      }
      const Alias* chosen = hits.front();
      if (hits.size() > 1) chosen = disambiguate(toks, i, hits, schema, pending);
      for (std::size_t k = i; k < i + best; ++k) consumed[k] = true;
      if (!picked.count(chosen->dimension)) order.push_back(chosen->dimension);
      picked[chosen->dimension].insert(chosen->value);
      i += best;
    }
    for (const auto& dim : order) {
      const auto& vals = picked[dim];
      if (vals.size() == 1) {
        delta.set(dim, Equals{*vals.begin()});
      } else {
        delta.set(dim, OneOf{vals});
      }
    }
  }

  // Dimension words in the same clause win, then the pending question, then
  // schema order.
  static const parse_detail::Alias* disambiguate(const std::vector<parse_detail::Token>& toks, std::size_t at,
                                                 const std::vector<const parse_detail::Alias*>& hits,
                                                 const SchemaSummary& schema,
                                                 const std::optional<std::string>& pending) {
    using namespace parse_detail;
    std::size_t lo = at, hi = at;
    while (lo > 0 && toks[lo - 1].kind != TokenKind::kSeparator) --lo;
    while (hi < toks.size() && toks[hi].kind != TokenKind::kSeparator) ++hi;

    std::map<std::string, std::set<std::string>> cues;
    for (const auto* h : hits) cues[h->dimension] = cue_words(*schema.find(h->dimension));
    // Only words that single out one candidate count.
    std::map<std::string, int> freq;
    for (const auto& [_, ws] : cues) {
      for (const auto& w : ws) ++freq[w];
    }
    const parse_detail::Alias* best = nullptr;
    std::size_t best_dist = SIZE_MAX;
    for (std::size_t k = lo; k < hi; ++k) {
      for (const auto* h : hits) {
        const auto& ws = cues[h->dimension];
        if (ws.count(toks[k].norm) && freq[toks[k].norm] == 1) {
          const std::size_t dist = k > at ? k - at : at - k;
          if (dist < best_dist) {
            best = h;
            best_dist = dist;
          }
        }
      }
    }
    if (best) return best;
    if (pending) {
      for (const auto* h : hits) {
        if (h->dimension == *pending) return h;
      }
    }
    return hits.front();
  }

  static void extract_numeric(const std::vector<parse_detail::Token>& toks, const SchemaSummary& schema,
                              const std::optional<std::string>& pending, const std::vector<int>& polarity,
                              std::vector<bool>& consumed, FilterSet& delta) {
    using namespace parse_detail;
    const DimensionSummary* currency_dim = nullptr;
    const DimensionSummary* distance_dim = nullptr;
    const DimensionSummary* year_dim = nullptr;
    for (const auto& d : schema.dimensions) {
      if (d.kind != AttributeKind::kContinuous) continue;
      if (!currency_dim && is_currency_unit(d.unit)) currency_dim = &d;
      if (!distance_dim && is_distance_unit(d.unit)) distance_dim = &d;
      if (!year_dim && d.unit.empty() && words(d.name) == Phrase{"year"}) year_dim = &d;
    }
    const DimensionSummary* pending_dim = nullptr;
    if (pending) {
      const auto* d = schema.find(*pending);
      if (d && d->kind == AttributeKind::kContinuous) pending_dim = d;
    }

    auto clause_has = [&](std::size_t at, const std::set<std::string>& cues, std::size_t reach) {
      for (std::size_t k = at; k > 0 && at - k < reach;) {
        --k;
        if (toks[k].kind == TokenKind::kSeparator) break;
        if (cues.count(toks[k].norm)) return true;
      }
      for (std::size_t k = at + 1; k < toks.size() && k - at <= 2; ++k) {
        if (toks[k].kind == TokenKind::kSeparator) break;
        if (cues.count(toks[k].norm)) return true;
      }
      return false;
    };

    std::map<std::string, Range> ranges;
    std::vector<std::string> order;
    auto bound = [&](const DimensionSummary* d, std::optional<double> lo, std::optional<double> hi) {
      if (!ranges.count(d->name)) order.push_back(d->name);
      auto& r = ranges[d->name];
      if (lo) r.lo = lo;
      if (hi) r.hi = hi;
    };

    for (std::size_t i = 0; i < toks.size(); ++i) {
      const Token& t = toks[i];
      if (t.kind != TokenKind::kNumber || consumed[i]) continue;

      const bool unit_after = i + 1 < toks.size() && mileage_cues().count(toks[i + 1].norm) &&
                              toks[i + 1].norm != "mileage";
      const bool currency_after =
          i + 1 < toks.size() && (toks[i + 1].norm == "dollars" || toks[i + 1].norm == "bucks" ||
                                  toks[i + 1].norm == "usd");
      const bool year_like = !t.currency && !t.thousands && std::floor(t.value) == t.value && t.value >= 1980 &&
                             t.value <= 2035 && t.norm.size() == 4;

      const DimensionSummary* dim = nullptr;
      if ((t.currency || currency_after) && currency_dim) {
        dim = currency_dim;
      } else if (unit_after && distance_dim) {
        dim = distance_dim;
      } else if (year_like && year_dim && clause_has(i, year_cues(), 4)) {
        dim = year_dim;
      } else if (distance_dim && clause_has(i, mileage_cues(), 4)) {
        dim = distance_dim;
      } else if (currency_dim && clause_has(i, currency_cues(), 4)) {
        dim = currency_dim;
      } else if (pending_dim) {
        dim = pending_dim;
      } else if (year_like && year_dim) {
        dim = year_dim;
      } else if ((t.value >= 1000 || t.thousands) && currency_dim) {
        dim = currency_dim;
      }
      if (!dim) continue;
      consumed[i] = true;
      if (unit_after || currency_after) consumed[i + 1] = true;

      // Explicit "between X and Y" / "X to Y" ranges.
      std::size_t next = i + 1 + ((unit_after || currency_after) ? 1 : 0);
      if (next + 1 < toks.size() && (toks[next].norm == "and" || toks[next].norm == "to") &&
          toks[next + 1].kind == TokenKind::kNumber) {
        double other = toks[next + 1].value;
        if (t.thousands && !toks[next + 1].thousands && !toks[next + 1].currency && other < 1000) other *= 1000.0;
        const double a = std::min(t.value, other), b = std::max(t.value, other);
        consumed[next] = consumed[next + 1] = true;
        if (i > 0 && (toks[i - 1].norm == "between" || toks[i - 1].norm == "from")) consumed[i - 1] = true;
        if (next + 2 < toks.size() && mileage_cues().count(toks[next + 2].norm)) consumed[next + 2] = true;
        bound(dim, a, b);
        continue;
      }

      int side = 0;  // +1 upper bound, -1 lower bound
      for (std::size_t back = 1; back <= 3 && back <= i && side == 0; ++back) {
        const std::size_t s = i - back;
        if (toks[s].kind == TokenKind::kSeparator) break;
        if (const std::size_t len = longest_match(toks, s, upper_words()); len > 0 && s + len <= i) {
          side = +1;
          for (std::size_t k = s; k < s + len; ++k) consumed[k] = true;
        } else if (const std::size_t len2 = longest_match(toks, s, lower_words()); len2 > 0 && s + len2 <= i) {
          side = -1;
          for (std::size_t k = s; k < s + len2; ++k) consumed[k] = true;
        }
      }
      if (side == 0 && next < toks.size()) {
        if (const std::size_t len = longest_match(toks, next, upper_suffix()); len > 0) {
          side = +1;
          for (std::size_t k = next; k < next + len; ++k) consumed[k] = true;
        } else if (const std::size_t len2 = longest_match(toks, next, lower_suffix()); len2 > 0) {
          side = -1;
          for (std::size_t k = next; k < next + len2; ++k) consumed[k] = true;
        }
      }
      if (side == 0) side = dim->unit.empty() ? -1 : +1;  // "2018" means 2018+, "$30k" means up to $30k
      if (polarity[i] < 0) side = -side;
      if (side > 0) {
        bound(dim, std::nullopt, t.value);
      } else {
        bound(dim, t.value, std::nullopt);
      }
    }
    for (const auto& name : order) delta.set(name, ranges[name]);
  }
};

}  // namespace idss

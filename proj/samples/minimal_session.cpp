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

// A scripted three-turn session against the bundled car catalog.
//
//   minimal_session [catalog.csv schema.json]

#include <iostream>
#include <memory>

#include "idss/idss.hpp"

int main(int argc, char** argv) {
  using namespace idss;
  const std::string csv = argc > 2 ? argv[1] : "data/cars.csv";
  const std::string schema = argc > 2 ? argv[2] : "data/cars.schema.json";

  auto catalog = std::make_shared<const Catalog>(load_catalog_files(csv, schema));
  const Engine engine(catalog, std::make_shared<HashingEmbedder>());
  const EngineConfig cfg;

  SessionState state = engine.new_session("demo", Strategy::kCR, cfg.max_questions);
  for (const char* msg : {"Looking for a used SUV, I love great fuel economy but hate road noise",
                          "I'd like to stay under $20k.", "Something 2015 or newer."}) {
    if (state.phase == Phase::kDone) break;
    std::cout << "user:  " << msg << "\n";
    const TurnResult r = engine.advance_turn(state, msg, cfg);
    if (r.question) {
      std::cout << "agent: " << r.question->question_text << "\n";
      continue;
    }
    std::cout << "agent: " << r.grid->item_count() << " picks from " << r.candidate_count << " candidates";
    if (r.grid->dimension) std::cout << ", grouped by " << *r.grid->dimension;
    std::cout << "\n";
    for (const auto& row : r.grid->rows) {
      std::cout << "  " << (row.label.empty() ? "Top picks" : row.label) << ":";
      for (const auto& c : row.items) std::cout << " " << c.id;
      std::cout << "\n";
    }
  }
  std::cout << to_json(state).dump(2) << "\n";
  return 0;
}

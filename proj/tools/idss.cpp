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

// Command-line front end: simulate, sweep, chat, serve.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idss/http_parser.hpp"
#include "idss/idss.hpp"
#include "idss/service.hpp"

namespace {

using namespace idss;

struct Common {
  std::string config;
  std::string catalog = "data/cars.csv";
  std::string schema = "data/cars.schema.json";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON config file (IDSS_* environment variables override it)");
  cmd->add_option("--catalog", c.catalog, "catalog CSV");
  cmd->add_option("--schema", c.schema, "schema JSON");
}

ServiceConfig load(const Common& c) {
  ServiceConfig cfg = load_service_config(c.config);
  if (c.config.empty()) {
    cfg.catalog_path = c.catalog;
    cfg.schema_path = c.schema;
  }
  return cfg;
}

std::shared_ptr<const ParserAdapter> make_parser(const ServiceConfig& cfg) {
  if (cfg.parser == "http") return std::make_shared<HttpParserAdapter>(cfg.parser_url, cfg.parser_max_in_flight);
  return std::make_shared<RuleBasedParser>();
}

std::shared_ptr<const Engine> make_engine(const ServiceConfig& cfg) {
  auto catalog = std::make_shared<const Catalog>(load_catalog_files(cfg.catalog_path, cfg.schema_path));
  return std::make_shared<const Engine>(catalog, std::make_shared<HashingEmbedder>(), make_parser(cfg));
}

std::vector<Strategy> strategies_from(const std::string& s) {
  if (s == "both") return {Strategy::kES, Strategy::kCR};
  return {strategy_from_string(s)};
}

std::vector<Ablation> ablations_from(const std::string& s) {
  if (s == "none") return {Ablation{false, false}};
  if (s == "mmr") return {Ablation{true, false}};
  if (s == "entropyq") return {Ablation{false, true}};
  if (s == "both") return {Ablation{true, true}};
  return all_ablations();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

void print_grid(const Grid& g, const std::vector<std::string>& relaxed) {
  if (!relaxed.empty()) std::cout << "(relaxed: " << text::join(relaxed, ", ") << ")\n";
  for (const auto& row : g.rows) {
    std::cout << (row.label.empty() ? std::string("Top picks") : row.label) << "\n";
    for (const auto& c : row.items) {
      std::cout << "  #" << c.selection_rank << " " << c.id;
      for (const char* key : {"year", "make", "body", "fuel", "price"}) {
        auto it = c.attributes.find(key);
        if (it == c.attributes.end()) continue;
        if (const auto* s = std::get_if<std::string>(&it->second)) std::cout << " " << *s;
        if (const auto* d = std::get_if<double>(&it->second)) {
          std::cout << " " << (std::string(key) == "price" ? text::format_quantity(*d, "USD") : text::short_decimal(*d, 0));
        }
      }
      std::cout << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-guided interactive decision support"};
  app.require_subcommand(1);

  // simulate
  Common sim_common;
  std::string personas_dir = "data/personas", strategy = "both", ablate = "all", out_path, markdown_path;
  int k = 2;
  std::size_t seeds = 3, threads = 1;
  std::uint64_t base_seed = 0;
  auto* sim = app.add_subcommand("simulate", "run persona simulations and write a metrics report");
  add_common(sim, sim_common);
  sim->add_option("--personas", personas_dir, "directory of persona JSON files");
  sim->add_option("--strategy", strategy, "ranking strategy")->check(CLI::IsMember({"es", "cr", "both"}));
  sim->add_option("--k", k, "maximum follow-up questions")->check(CLI::Range(0, 5));
  sim->add_option("--ablate", ablate, "ablation cell(s) to run")
      ->check(CLI::IsMember({"mmr", "entropyq", "both", "none", "all"}));
  sim->add_option("--seeds", seeds, "number of seeds")->check(CLI::PositiveNumber);
  sim->add_option("--seed", base_seed, "first seed");
  sim->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  sim->add_option("--out", out_path, "JSON report path (stdout when omitted)");
  sim->add_option("--markdown", markdown_path, "markdown table path");

  // sweep
  Common sweep_common;
  std::vector<double> lambdas{0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 1.0};
  std::string sweep_strategy = "es";
  std::size_t sweep_seeds = 1;
  auto* sweep = app.add_subcommand("sweep", "MMR lambda sweep over the persona suite");
  add_common(sweep, sweep_common);
  sweep->add_option("--personas", personas_dir, "directory of persona JSON files");
  sweep->add_option("--lambdas", lambdas, "lambda values")->delimiter(',');
  sweep->add_option("--strategy", sweep_strategy, "ranking strategy")->check(CLI::IsMember({"es", "cr"}));
  sweep->add_option("--seeds", sweep_seeds, "number of seeds")->check(CLI::PositiveNumber);

  // chat
  Common chat_common;
  std::string chat_strategy = "es";
  int chat_k = 2;
  bool chat_debug = false;
  auto* chat = app.add_subcommand("chat", "interactive session on the terminal");
  add_common(chat, chat_common);
  chat->add_option("--strategy", chat_strategy, "ranking strategy")->check(CLI::IsMember({"es", "cr"}));
  chat->add_option("--k", chat_k, "maximum follow-up questions")->check(CLI::Range(0, 5));
  chat->add_flag("--debug", chat_debug, "print entropy per dimension each turn");

  // serve
  Common serve_common;
  auto* serve = app.add_subcommand("serve", "HTTP API");
  add_common(serve, serve_common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const ServiceConfig cfg = load(sim_common);
      auto engine = make_engine(cfg);
      const auto personas = load_personas(personas_dir);
      for (const auto& p : personas) validate_persona(p, engine->catalog().schema());
      EngineConfig ec = cfg.engine;
      ec.max_questions = k;
      SuiteOptions opt;
      opt.strategies = strategies_from(strategy);
      opt.ablations = ablations_from(ablate);
      opt.seeds = seeds;
      opt.base_seed = base_seed;
      opt.threads = threads;
      const SuiteReport report = run_suite(personas, *engine, ec, opt);
      const std::string body = to_json(report).dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << body;
      } else {
        write_file(out_path, body);
      }
      if (!markdown_path.empty()) write_file(markdown_path, to_markdown(report));
      return 0;
    }
    if (*sweep) {
      const ServiceConfig cfg = load(sweep_common);
      auto engine = make_engine(cfg);
      const auto personas = load_personas(personas_dir);
      const auto points = lambda_sweep(personas, *engine, cfg.engine, strategy_from_string(sweep_strategy), lambdas,
                                       sweep_seeds);
      std::printf("| lambda | Prec@%zu | NDCG@%zu | ILD |\n|---|---|---|---|\n", cfg.engine.top_k, cfg.engine.top_k);
      for (const auto& p : points) {
        std::printf("| %.2f | %.3f | %.3f | %.3f |\n", p.lambda, p.precision.mean, p.ndcg.mean, p.ild.mean);
      }
      return 0;
    }
    if (*chat) {
      const ServiceConfig cfg = load(chat_common);
      auto engine = make_engine(cfg);
      EngineConfig ec = cfg.engine;
      SessionState state = engine->new_session("terminal", strategy_from_string(chat_strategy), chat_k);
      std::cout << "What are you looking for?\n> " << std::flush;
      std::string line;
      while (state.phase != Phase::kDone && std::getline(std::cin, line)) {
        if (text::trim(line).empty()) {
          std::cout << "> " << std::flush;
          continue;
        }
        const TurnResult r = engine->advance_turn(state, line, ec);
        if (chat_debug) {
          for (const auto& d : r.entropy.dimensions) {
            std::printf("  [%s H=%.3f Hn=%.3f]\n", d.dimension.c_str(), d.raw_entropy, d.normalized_entropy);
          }
        }
        if (r.question) {
          std::cout << r.question->question_text << "\n> " << std::flush;
        } else if (r.grid) {
          print_grid(*r.grid, r.relaxed);
        }
      }
      return 0;
    }
    if (*serve) {
      const ServiceConfig cfg = load(serve_common);
      auto engine = make_engine(cfg);
      Service service(engine, cfg.engine, cfg.event_log_dir);
      httplib::Server server;
      service.mount(server, cfg.static_dir);
      std::printf("listening on http://%s:%d\n", cfg.host.c_str(), cfg.port);
      std::fflush(stdout);
      if (!server.listen(cfg.host, cfg.port)) {
        std::fprintf(stderr, "cannot listen on %s:%d\n", cfg.host.c_str(), cfg.port);
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

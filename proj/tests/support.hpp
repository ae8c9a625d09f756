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

// Shared fixtures: a hand-built toy catalog and the bundled car data.

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "idss/idss.hpp"

#ifndef IDSS_DATA_DIR
#define IDSS_DATA_DIR "data"
#endif

namespace idss::testing {

inline std::string data_path(const std::string& rel) { return std::string(IDSS_DATA_DIR) + "/" + rel; }

// body, fuel, exterior_color (categorical), year, price (continuous).
inline Schema toy_schema() {
  AttributeSchema body{"body", AttributeKind::kCategorical, "", 6, "body style", {{"crossover", "SUV"}}};
  AttributeSchema fuel{"fuel", AttributeKind::kCategorical, "", 5, "fuel type", {{"gas", "gasoline"}}};
  AttributeSchema color{"exterior_color", AttributeKind::kCategorical, "", 1, "exterior color", {}};
  AttributeSchema year{"year", AttributeKind::kContinuous, "", 2, "model year", {}};
  AttributeSchema price{"price", AttributeKind::kContinuous, "USD", 8, "price", {}};
  return Schema({body, fuel, color, year, price});
}

inline const char* kToyCsv =
    "id,body,fuel,exterior_color,year,price,description,pros,cons\n"
    "t1,SUV,gasoline,black,2018,\"$24,000\",Roomy gasoline SUV with great fuel economy,great fuel economy|roomy "
    "cabin,road noise\n"
    "t2,SUV,hybrid,white,2020,\"$31,000\",Quiet hybrid SUV,quiet cabin|great fuel economy,small trunk\n"
    "t3,sedan,gasoline,red,2015,\"$12,500\",Sporty sedan,fun to drive,road noise|stiff ride\n"
    "t4,sedan,electric,white,2021,\"$38,000\",Electric sedan with long range,long range|quiet cabin,"
    "limited range in cold weather\n"
    "t5,truck,gasoline,black,2017,\"$27,500\",Work truck,towing capacity,poor fuel economy\n"
    "t6,SUV,electric,blue,2022,\"$45,000\",Electric SUV,strong acceleration,high price\n"
    "t7,sedan,hybrid,black,2019,NA,Hybrid sedan with no listed price,great fuel economy,bland styling\n"
    "t8,truck,diesel,gray,2016,\"$22,000\",Diesel truck,towing capacity|durable,road noise\n";

inline Catalog toy_catalog() {
  std::istringstream in(kToyCsv);
  return load_catalog(in, toy_schema());
}

inline std::shared_ptr<const Catalog> cars() {
  static const auto c =
      std::make_shared<const Catalog>(load_catalog_files(data_path("cars.csv"), data_path("cars.schema.json")));
  return c;
}

inline std::shared_ptr<const Engine> car_engine() {
  static const auto e = std::make_shared<const Engine>(cars(), std::make_shared<HashingEmbedder>());
  return e;
}

inline const std::vector<Persona>& personas() {
  static const auto p = load_personas(data_path("personas"));
  return p;
}

inline std::vector<std::size_t> ids_to_indices(const Catalog& c, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  for (const auto& id : ids) out.push_back(*c.find(id));
  return out;
}

inline std::vector<std::string> indices_to_ids(const Catalog& c, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (std::size_t i : idx) out.push_back(c.item(i).id);
  return out;
}

}  // namespace idss::testing

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

// Everything except the HTTP pieces (service.hpp, http_parser.hpp), which
// pull in cpp-httplib.

#include "idss/catalog.hpp"
#include "idss/config.hpp"
#include "idss/dialogue.hpp"
#include "idss/diversify.hpp"
#include "idss/embedding.hpp"
#include "idss/entropy.hpp"
#include "idss/error.hpp"
#include "idss/evalsim.hpp"
#include "idss/parsing.hpp"
#include "idss/ranking.hpp"
#include "idss/text.hpp"

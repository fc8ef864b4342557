// Copyright 2026 The hfv Authors. All Rights Reserved.
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

// Run configuration, reports and the command-line dispatcher.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hfv {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  unsigned stage = 4;      // outer-model and fleet budget stage
  unsigned name_cap = 3;   // name-rank cap for extensions
  unsigned depth = 6;      // proof-search depth
  unsigned level_cap = 4;  // constructible-level cap
  std::string pool_path;   // formula pool, one formula per line
  std::string format = "json";
  std::uint32_t seed = 1;

  /// Throws ValidationError for a zero cap or an unknown format.
  void validate() const;
  Json to_json() const;
  /// Overrides the fields present in `j`; unknown keys are errors.
  void merge(const Json& j);
};

struct Report {
  std::string operation;
  std::string inputs_digest;
  Json findings = Json::array();
  Json verdicts = Json::object();
  bool ok = true;
  double runtime_seconds = 0;
  std::string version = kVersion;

  /// Everything except the runtime; byte-identical across equal runs.
  Json body() const;
  Json to_json() const;
  std::string to_text() const;
};

/// FNV-1a 64 as 16 hex digits.
std::string digest(std::string_view bytes);

/// Digest of the configuration together with the named inputs.
std::string inputs_digest(const RunConfig& cfg, const Json& inputs);

// -- suites -------------------------------------------------------------------

/// decode(quotient(encode_set(x))) = x for every x of rank below max_rank + 1.
Report code_roundtrip(unsigned max_rank);
/// Semantic against syntactic forcing on every poset with at most
/// `max_conditions` conditions, the seeded rank-2 names and the formula pool.
Report force_audit(const RunConfig& cfg, std::size_t max_conditions, std::size_t assignments);
/// Covering and geology statistics on `count` seeded forcing pairs.
Report lab_fleet(const RunConfig& cfg, std::size_t count, std::size_t max_size);

// -- command line ---------------------------------------------------------------

struct CommandInfo {
  std::string path;                     // e.g. "force relation"
  std::vector<std::string> operations;  // library operations it exposes
};

/// One entry per leaf subcommand.
const std::vector<CommandInfo>& command_table();

/// Parses and runs one command line. Reports go to `out` (or the --out
/// file, relative to $HFV_OUT_DIR when set), diagnostics to `err`.
/// Returns 0 on success, 1 when a report's verdict fails, 2 on errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hfv

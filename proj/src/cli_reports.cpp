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

#include "hfv/cli_reports.hpp"

#include <chrono>
#include <random>
#include <sstream>

#include "hfv/errors.hpp"
#include "hfv/fleets.hpp"
#include "hfv/forcing_engine.hpp"
#include "hfv/hf_core.hpp"
#include "hfv/multiverse_lab.hpp"
#include "hfv/tree_coding.hpp"

namespace hfv {

void RunConfig::validate() const {
  if (stage == 0 || name_cap == 0 || depth == 0 || level_cap == 0)
    throw ValidationError("caps must be positive");
  if (format != "json" && format != "text") throw ValidationError("unknown format " + format);
}

Json RunConfig::to_json() const {
  return Json{{"stage", stage},         {"name_cap", name_cap}, {"depth", depth},
              {"level_cap", level_cap}, {"pool", pool_path},    {"format", format},
              {"seed", seed}};
}

void RunConfig::merge(const Json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (k == "stage") stage = v.get<unsigned>();
    else if (k == "name_cap") name_cap = v.get<unsigned>();
    else if (k == "depth") depth = v.get<unsigned>();
    else if (k == "level_cap") level_cap = v.get<unsigned>();
    else if (k == "pool") pool_path = v.get<std::string>();
    else if (k == "format") format = v.get<std::string>();
    else if (k == "seed") seed = v.get<std::uint32_t>();
    else throw ValidationError("unknown config key " + k);
  }
}

Json Report::body() const {
  return Json{{"operation", operation}, {"inputs_digest", inputs_digest}, {"findings", findings},
              {"verdicts", verdicts},   {"ok", ok},                       {"version", version}};
}

Json Report::to_json() const {
  Json j = body();
  j["runtime_seconds"] = runtime_seconds;
  return j;
}

namespace {

void render(std::ostringstream& os, const Json& j, const std::string& indent) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured()) {
        os << indent << k << ":\n";
        render(os, v, indent + "  ");
      } else {
        os << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured()) {
        os << indent << "-\n";
        render(os, v, indent + "  ");
      } else {
        os << indent << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else {
    os << indent << j.dump() << "\n";
  }
}

}  // namespace

std::string Report::to_text() const {
  std::ostringstream os;
  os << operation << (ok ? "  ok" : "  FAILED") << "\n";
  os << "inputs " << inputs_digest << ", version " << version << "\n";
  if (!verdicts.empty()) {
    os << "verdicts:\n";
    render(os, verdicts, "  ");
  }
  if (!findings.empty()) {
    os << "findings:\n";
    render(os, findings, "  ");
  }
  return os.str();
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

std::string inputs_digest(const RunConfig& cfg, const Json& inputs) {
  Json c = cfg.to_json();
  c.erase("format");  // rendering only
  return digest(Json{{"config", c}, {"inputs", inputs}}.dump());
}

// -- suites -------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

Report code_roundtrip(unsigned max_rank) {
  if (max_rank > 4) throw BudgetError("max-rank", "roundtrip above rank 4");
  const auto t0 = Clock::now();
  Report r;
  r.operation = "code roundtrip";
  RunConfig cfg;
  r.inputs_digest = inputs_digest(cfg, Json{{"max_rank", max_rank}});
  const auto all = stage(max_rank + 1);
  std::size_t mismatches = 0, non_extensional = 0;
  Json examples = Json::array();
  for (const auto& x : all.elements()) {
    const auto q = quotient(encode_set(x));
    const bool same = decode(q) == x;
    mismatches += !same;
    non_extensional += !is_extensional_quotient(q);
    if (!same && examples.size() < 5) examples.push_back(to_string(x));
  }
  r.findings.push_back({{"sets", all.size()},
                        {"mismatches", mismatches},
                        {"non_extensional", non_extensional},
                        {"examples", examples}});
  r.ok = mismatches == 0 && non_extensional == 0;
  r.verdicts = {{"roundtrip", r.ok}};
  r.runtime_seconds = seconds_since(t0);
  return r;
}

Report force_audit(const RunConfig& cfg, std::size_t max_conditions, std::size_t assignments) {
  const auto t0 = Clock::now();
  Report r;
  r.operation = "force audit";
  r.inputs_digest = inputs_digest(
      cfg, Json{{"max_conditions", max_conditions}, {"assignments", assignments}});
  const FiniteStructure M(ordinal(3));
  std::vector<Formula> pool;
  for (const auto& t : forcing_formula_texts()) pool.push_back(parse_formula(t));
  std::mt19937 rng(cfg.seed);
  std::size_t total = 0, disagreements = 0, persistence = 0, forced = 0;
  for (const auto& P : posets_with_top(max_conditions)) {
    const auto ns = rank2_names(P, cfg.seed);
    std::uniform_int_distribution<std::size_t> pick(0, ns.names.size() - 1);
    std::size_t local = 0, bad = 0;
    for (const auto& phi : pool)
      for (std::size_t s = 0; s < assignments; ++s) {
        ForcingQuery q{M, P, ns, {{"a", ns.names[pick(rng)]}, {"b", ns.names[pick(rng)]},
                                  {"g", generic_name(P)}}};
        std::vector<bool> syn(P.size());
        for (std::size_t p = 0; p < P.size(); ++p) {
          syn[p] = forces_syntactic(p, phi, q);
          bad += syn[p] != forces_semantic(p, phi, q);
          forced += syn[p];
          ++local;
        }
        for (std::size_t p = 0; p < P.size(); ++p)
          for (std::size_t b : P.below(p)) persistence += syn[p] && !syn[b];
      }
    total += local;
    disagreements += bad;
    r.findings.push_back({{"poset", write_poset(P)},
                          {"names", ns.names.size()},
                          {"checks", local},
                          {"disagreements", bad}});
  }
  r.ok = disagreements == 0 && persistence == 0;
  r.verdicts = {{"posets", r.findings.size()},  {"checks", total},
                {"forced", forced},             {"disagreements", disagreements},
                {"persistence_failures", persistence}};
  r.runtime_seconds = seconds_since(t0);
  return r;
}

Report lab_fleet(const RunConfig& cfg, std::size_t count, std::size_t max_size) {
  const auto t0 = Clock::now();
  Report r;
  r.operation = "lab fleet";
  r.inputs_digest = inputs_digest(cfg, Json{{"count", count}, {"max_size", max_size}});
  std::size_t direction_fail = 0, converse_covered = 0, undetected = 0;
  const auto pairs = forcing_pairs(cfg.seed, count, max_size);
  for (const auto& fp : pairs) {
    const auto k = is_ccc(fp.P).max_antichain;
    const bool direction = global_covers(fp.W, fp.E, k + 1);
    const bool at2 = global_covers(fp.W, fp.E, 2);
    bool detected = false;
    for (const auto& g : grounds(fp.E, 5))
      detected = detected || (!g.trivial() && g.W == fp.W);
    direction_fail += !direction;
    converse_covered += at2;
    undetected += !detected;
    r.findings.push_back({{"ground", fp.W.domain().size()},
                          {"extension", fp.E.domain().size()},
                          {"conditions", fp.P.size()},
                          {"max_antichain", k},
                          {"covers_above_antichain", direction},
                          {"covers_at_2", at2},
                          {"ground_detected", detected}});
  }
  r.ok = direction_fail == 0 && undetected == 0;
  r.verdicts = {{"pairs", pairs.size()},
                {"covering_failures", direction_fail},
                {"covered_at_2", converse_covered},
                {"undetected_grounds", undetected}};
  r.runtime_seconds = seconds_since(t0);
  return r;
}

}  // namespace hfv

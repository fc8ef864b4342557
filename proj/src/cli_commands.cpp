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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "hfv/cli_reports.hpp"
#include "hfv/constructible.hpp"
#include "hfv/errors.hpp"
#include "hfv/forcing_engine.hpp"
#include "hfv/hf_core.hpp"
#include "hfv/logic_syntax.hpp"
#include "hfv/multiverse_lab.hpp"
#include "hfv/tree_coding.hpp"
#include "hfv/vlogic_proofs.hpp"

namespace hfv {

namespace {

using Clock = std::chrono::steady_clock;
using Action = std::function<Report()>;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs a parser over a file, prefixing parse errors with the path.
template <class F>
auto parse_file(const std::string& path, F&& parse) {
  const auto text = read_file(path);
  try {
    return parse(std::string_view(text));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// A set given inline or as @file.
SetValue set_arg(const std::string& s) {
  if (!s.empty() && s[0] == '@')
    return parse_file(s.substr(1), [](std::string_view t) { return parse_set(t); });
  return parse_set(s);
}

std::vector<Formula> read_pool(const std::string& path) {
  std::vector<Formula> out;
  const auto text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == ';') continue;
    try {
      out.push_back(parse_formula(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what(), n);
    }
  }
  return out;
}

std::size_t label_index(const Poset& P, const std::string& label) {
  const auto x = parse_set(label);
  for (std::size_t i = 0; i < P.size(); ++i)
    if (P.label(i) == x) return i;
  throw ValidationError("no condition labelled " + label);
}

Json filter_json(const Poset& P, const Filter& G) {
  Json j = Json::array();
  for (std::size_t i = 0; i < P.size(); ++i)
    if (G[i]) j.push_back(to_string(P.label(i)));
  return j;
}

Json model_json(const UniverseModel& m) {
  return Json{{"size", m.domain().size()}, {"height", m.height()}, {"domain", to_string(m.domain())}};
}

Json proof_json(const std::optional<ProofTree>& p) {
  if (!p) return nullptr;
  return Json{{"height", p->height()}, {"nodes", p->node_count()}, {"outline", write_proof(*p)}};
}

struct Cli {
  CLI::App app{"Desk-scale laboratory for hereditarily finite set theory"};
  RunConfig cfg;
  std::string config_path, out_path;
  std::vector<CommandInfo> table;
  Action action;
  Json inputs = Json::object();

  // Flag values held apart so that only given flags override the config file.
  unsigned stage = 0, name_cap = 0, depth = 0, level_cap = 0;
  std::uint32_t seed = 0;
  std::string pool, format;
  CLI::Option *o_stage, *o_cap, *o_depth, *o_level, *o_seed, *o_pool, *o_format;

  Cli() {
    app.name("hfv");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", config_path, "JSON config file; flags override it");
    app.add_option("--out", out_path, "write the report here (relative to $HFV_OUT_DIR)");
    o_format = app.add_option("--format", format, "json or text");
    o_stage = app.add_option("--stage", stage, "budget stage");
    o_cap = app.add_option("--name-cap", name_cap, "name-rank cap");
    o_depth = app.add_option("--depth", depth, "proof-depth cap");
    o_level = app.add_option("--level-cap", level_cap, "constructible level cap");
    o_pool = app.add_option("--pool", pool, "formula pool file");
    o_seed = app.add_option("--seed", seed, "seed for sampled fleets");
    add_hf();
    add_formula();
    add_code();
    add_prove();
    add_lhier();
    add_force();
    add_lab();
  }

  void finish_config() {
    if (!config_path.empty()) {
      try {
        cfg.merge(Json::parse(read_file(config_path)));
      } catch (const Json::exception& e) {
        throw ParseError(config_path + ": " + e.what());
      }
    }
    if (o_stage->count()) cfg.stage = stage;
    if (o_cap->count()) cfg.name_cap = name_cap;
    if (o_depth->count()) cfg.depth = depth;
    if (o_level->count()) cfg.level_cap = level_cap;
    if (o_seed->count()) cfg.seed = seed;
    if (o_pool->count()) cfg.pool_path = pool;
    if (o_format->count()) cfg.format = format;
    cfg.validate();
  }

  CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& help,
                 std::vector<std::string> ops, std::function<Report()> run) {
    auto* sub = parent->add_subcommand(name, help);
    table.push_back({parent->get_name() + " " + name, std::move(ops)});
    sub->callback([this, run = std::move(run)] { action = run; });
    return sub;
  }

  // Shared report header.
  Report start(const std::string& op) {
    Report r;
    r.operation = op;
    r.inputs_digest = inputs_digest(cfg, inputs);
    return r;
  }

  // Inline options go into the digest as given; @file inputs by content.
  std::string digest_of(const std::string& s) {
    return !s.empty() && s[0] == '@' ? digest(read_file(s.substr(1))) : s;
  }

  std::vector<Formula> pool_or(std::vector<Formula> fallback) {
    if (cfg.pool_path.empty()) return fallback;
    inputs["pool"] = digest(read_file(cfg.pool_path));
    return read_pool(cfg.pool_path);
  }

  // -- hf ----------------------------------------------------------------------

  std::string hf_set;
  unsigned hf_n = 0;

  void add_hf() {
    auto* hf = app.add_subcommand("hf", "hereditarily finite sets");
    hf->require_subcommand(1);
    leaf(hf, "inspect", "rank, transitive closure and shape of a set",
         {"make_set", "transitive_closure", "rank", "is_transitive", "is_ordinal"}, [this] {
           inputs["set"] = digest_of(hf_set);
           auto r = start("hf inspect");
           const auto x = set_arg(hf_set);
           const auto members = x.elements();
           const auto rebuilt = make_set({members.begin(), members.end()});
           const auto tc = transitive_closure(x);
           r.findings.push_back({{"set", to_string(x)},
                                 {"size", x.size()},
                                 {"rank", rank(x)},
                                 {"transitive_closure_size", tc.size()},
                                 {"transitive", is_transitive(x)},
                                 {"ordinal", is_ordinal(x)},
                                 {"canonical", rebuilt == x}});
           return r;
         })->add_option("set", hf_set, "set in brace notation or @file")->required();
    leaf(hf, "ordinal", "the von Neumann natural n", {"ordinal"}, [this] {
      inputs["n"] = hf_n;
      auto r = start("hf ordinal");
      r.findings.push_back({{"n", hf_n}, {"set", to_string(ordinal(hf_n))}});
      return r;
    })->add_option("n", hf_n)->required();
    leaf(hf, "stage", "the stage V_n", {"stage"}, [this] {
      inputs["n"] = hf_n;
      auto r = start("hf stage");
      const auto v = hfv::stage(hf_n);
      Json f{{"n", hf_n}, {"size", v.size()}};
      if (hf_n <= 3) f["set"] = to_string(v);
      r.findings.push_back(f);
      return r;
    })->add_option("n", hf_n)->required();
  }

  // -- formula -------------------------------------------------------------------

  std::string f_text, f_domain, f_code;
  std::vector<std::string> f_preds, f_extras;

  Signature signature_arg() { return Signature{set_arg(f_domain), f_extras}; }

  void add_formula() {
    auto* f = app.add_subcommand("formula", "formulas, codes and satisfaction");
    f->require_subcommand(1);
    leaf(f, "classify", "Δ0 / Σn / Πn class", {"classify"}, [this] {
      inputs["formula"] = f_text;
      auto r = start("formula classify");
      const auto phi = parse_formula(f_text);
      r.findings.push_back({{"formula", to_string(phi)}, {"class", to_string(classify(phi))}});
      return r;
    })->add_option("formula", f_text)->required();
    auto* ev = leaf(f, "eval", "truth of a sentence in a finite structure", {"satisfies"}, [this] {
      inputs["formula"] = f_text;
      inputs["domain"] = digest_of(f_domain);
      inputs["preds"] = f_preds;
      auto r = start("formula eval");
      FiniteStructure s(set_arg(f_domain));
      for (const auto& p : f_preds) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw ValidationError("predicate must be NAME=SET: " + p);
        s = s.with_predicate(p.substr(0, eq), set_arg(p.substr(eq + 1)));
      }
      const auto phi = parse_formula(f_text);
      r.findings.push_back({{"formula", to_string(phi)}, {"holds", satisfies(s, phi)}});
      return r;
    });
    ev->add_option("formula", f_text)->required();
    ev->add_option("--domain", f_domain)->required();
    ev->add_option("--pred", f_preds, "NAME=SET");
    auto* en = leaf(f, "encode", "code of a formula as a set", {"encode_formula"}, [this] {
      inputs["formula"] = f_text;
      inputs["base"] = digest_of(f_domain);
      inputs["extras"] = f_extras;
      auto r = start("formula encode");
      const auto phi = parse_formula(f_text);
      const auto code = encode_formula(phi, signature_arg(), free_vars(phi));
      r.findings.push_back({{"formula", to_string(phi)}, {"code", to_string(code)}, {"rank", rank(code)}});
      return r;
    });
    en->add_option("formula", f_text)->required();
    en->add_option("--base", f_domain)->required();
    en->add_option("--extra", f_extras);
    auto* de = leaf(f, "decode", "formula coded by a set", {"decode_formula"}, [this] {
      inputs["code"] = digest_of(f_code);
      inputs["base"] = digest_of(f_domain);
      inputs["extras"] = f_extras;
      auto r = start("formula decode");
      r.findings.push_back({{"formula", to_string(decode_formula(set_arg(f_code), signature_arg()))}});
      return r;
    });
    de->add_option("code", f_code, "set or @file")->required();
    de->add_option("--base", f_domain)->required();
    de->add_option("--extra", f_extras);
  }

  // -- code ----------------------------------------------------------------------

  unsigned c_rank = 3;
  std::string c_file, c_x, c_y, c_phi, c_ctx = "#0";

  void add_code() {
    auto* c = app.add_subcommand("code", "coding pairs and quotient trees");
    c->require_subcommand(1);
    leaf(c, "roundtrip", "exhaustive encode/quotient/decode check", {}, [this] {
      auto r = code_roundtrip(c_rank);
      r.inputs_digest = inputs_digest(cfg, Json{{"max_rank", c_rank}});
      return r;
    })->add_option("--max-rank", c_rank);
    leaf(c, "validate", "check an outline file against the coding-pair conditions",
         {"validate_coding_pair"}, [this] {
           inputs["file"] = digest(read_file(c_file));
           auto r = start("code validate");
           const auto t = parse_file(c_file, [](std::string_view s) { return parse_outline(s); });
           const auto rep = validate_coding_pair(t);
           r.ok = rep.ok;
           r.findings.push_back({{"nodes", t.size()},
                                 {"clause", static_cast<int>(rep.clause)},
                                 {"witnesses", rep.witnesses},
                                 {"message", rep.message}});
           r.verdicts = {{"coding_pair", rep.ok}};
           return r;
         })->add_option("file", c_file)->required();
    leaf(c, "quotient", "coding tree and quotient of a set", {"encode_set", "quotient", "decode"},
         [this] {
           inputs["set"] = digest_of(c_x);
           auto r = start("code quotient");
           const auto x = set_arg(c_x);
           const auto t = encode_set(x);
           const auto q = quotient(t);
           const bool back = decode(q) == x;
           r.ok = back;
           r.findings.push_back({{"set", to_string(x)},
                                 {"coding_nodes", t.raw().size()},
                                 {"quotient_nodes", q.size()},
                                 {"decodes_back", back}});
           return r;
         })->add_option("set", c_x)->required();
    auto* pr = leaf(c, "pair", "representative pair of two sets", {"rep_pair"}, [this] {
      inputs["x"] = digest_of(c_x);
      inputs["y"] = digest_of(c_y);
      auto r = start("code pair");
      const auto p = rep_pair(set_arg(c_x), set_arg(c_y));
      r.findings.push_back({{"pair", to_string(p)}, {"rank", rank(p)}});
      return r;
    });
    pr->add_option("x", c_x)->required();
    pr->add_option("y", c_y)->required();
    auto* cmp = leaf(c, "compare", "E_T and =_T between two quotients", {"et_related", "tt_equal"},
                     [this] {
                       inputs["x"] = digest_of(c_x);
                       inputs["y"] = digest_of(c_y);
                       auto r = start("code compare");
                       const auto qx = quotient_of_set(set_arg(c_x));
                       const auto qy = quotient_of_set(set_arg(c_y));
                       r.findings.push_back({{"member", et_related(qx, qy)}, {"equal", tt_equal(qx, qy)}});
                       return r;
                     });
    cmp->add_option("x", c_x)->required();
    cmp->add_option("y", c_y)->required();
    auto* ops = leaf(c, "ops", "pairing, union and separation on quotients",
                     {"pairing_plus", "union_plus", "separation_plus", "transitivity_check"}, [this] {
                       inputs["x"] = digest_of(c_x);
                       inputs["y"] = digest_of(c_y.empty() ? c_x : c_y);
                       inputs["formula"] = c_phi;
                       inputs["context"] = digest_of(c_ctx);
                       auto r = start("code ops");
                       const auto qx = quotient_of_set(set_arg(c_x));
                       const auto qy = quotient_of_set(set_arg(c_y.empty() ? c_x : c_y));
                       Json f{{"pair", to_string(decode(pairing_plus(qx, qy)))},
                              {"union", to_string(decode(union_plus(qx)))},
                              {"transitive", transitivity_check(qx)}};
                       if (!c_phi.empty()) {
                         const FiniteStructure ctx(set_arg(c_ctx));
                         f["separation"] =
                             to_string(decode(separation_plus(qx, parse_formula(c_phi), ctx)));
                       }
                       r.findings.push_back(f);
                       return r;
                     });
    ops->add_option("x", c_x)->required();
    ops->add_option("y", c_y);
    ops->add_option("--formula", c_phi, "separation formula in the free variable y");
    ops->add_option("--context", c_ctx, "transitive context structure");
  }

  // -- prove ---------------------------------------------------------------------

  std::string p_file, p_theory, p_base = "#0";

  TheoryFile theory_arg() {
    return parse_file(p_theory, [](std::string_view t) { return parse_theory(t); });
  }

  void add_prove() {
    auto* p = app.add_subcommand("prove", "V-logic proofs");
    p->require_subcommand(1);
    auto* ch = leaf(p, "check", "check a proof outline", {"check_proof"}, [this] {
      inputs["proof"] = digest(read_file(p_file));
      if (!p_theory.empty()) inputs["theory"] = digest(read_file(p_theory));
      else inputs["base"] = digest_of(p_base);
      auto r = start("prove check");
      const auto proof = parse_file(p_file, [](std::string_view t) { return parse_proof(t); });
      TheoryFile tf{Theory("empty", {}), Signature{set_arg(p_base), {}}};
      if (!p_theory.empty()) tf = theory_arg();
      const auto v = check_proof(proof, tf.theory, tf.sig);
      r.ok = v.accepted;
      r.verdicts = {{"accepted", v.accepted}};
      r.findings.push_back({{"conclusion", to_string(proof.conclusion())},
                            {"nodes", proof.node_count()},
                            {"failing_path", v.path},
                            {"diagnostic", v.diagnostic}});
      return r;
    });
    ch->add_option("proof", p_file)->required();
    ch->add_option("--theory", p_theory);
    ch->add_option("--base", p_base, "base when no theory file is given");
    leaf(p, "search", "bounded refutation search", {"refutation_search"}, [this] {
      inputs["theory"] = digest(read_file(p_theory));
      auto r = start("prove search");
      const auto tf = theory_arg();
      const auto proof = refutation_search(tf.theory, tf.sig, cfg.depth);
      r.verdicts = {{"refuted", proof.has_value()}};
      r.findings.push_back({{"theory", tf.theory.name()}, {"proof", proof_json(proof)}});
      return r;
    })->add_option("theory", p_theory)->required();
    leaf(p, "consistent", "refutation search and model search together", {"consistent"}, [this] {
      inputs["theory"] = digest(read_file(p_theory));
      auto r = start("prove consistent");
      const auto tf = theory_arg();
      ConsistencyBudget b;
      b.depth = cfg.depth;
      b.stage = cfg.stage;
      const auto v = consistent(tf.theory, tf.sig, b);
      r.verdicts = {{"verdict", to_string(v.kind)}};
      Json f{{"theory", tf.theory.name()}, {"proof", proof_json(v.proof)}};
      if (v.witness) f["model"] = to_string(v.witness->domain());
      r.findings.push_back(f);
      return r;
    })->add_option("theory", p_theory)->required();
  }

  // -- lhier ---------------------------------------------------------------------

  std::string l_base = "#0", l_kind = "separation", l_phi, l_set, l_proof;
  unsigned l_n = 1;

  void add_lhier() {
    auto* l = app.add_subcommand("lhier", "the constructible hierarchy over a base");
    l->require_subcommand(1);
    auto* lv = leaf(l, "level", "the level L_n(base)", {"l_level"}, [this] {
      inputs["base"] = digest_of(l_base);
      inputs["n"] = l_n;
      auto r = start("lhier level");
      LConfig lc;
      lc.level_cap = cfg.level_cap;
      lc.pool = pool_or({});
      const auto lvl = l_level(FiniteStructure(set_arg(l_base)), l_n, lc);
      Json f{{"n", lvl.index}, {"size", lvl.domain.size()}, {"rank", rank(lvl.domain)}};
      if (lvl.domain.size() <= 64) f["level"] = to_string(lvl.domain);
      r.findings.push_back(f);
      return r;
    });
    lv->add_option("--base", l_base);
    lv->add_option("-n", l_n)->required();
    auto* kp = leaf(l, "kp", "one Δ0-Separation or Δ0-Collection instance", {"check_kp_instance"},
                    [this] {
                      inputs["base"] = digest_of(l_base);
                      inputs["n"] = l_n;
                      inputs["kind"] = l_kind;
                      inputs["formula"] = l_phi;
                      inputs["set"] = digest_of(l_set);
                      auto r = start("lhier kp");
                      LConfig lc;
                      lc.level_cap = cfg.level_cap;
                      const auto lvl = l_level(FiniteStructure(set_arg(l_base)), l_n, lc);
                      if (l_kind != "collection" && l_kind != "separation")
                        throw ValidationError("unknown kind " + l_kind);
                      const KPInstance inst{l_kind == "collection" ? KPInstance::kCollection
                                                                  : KPInstance::kSeparation,
                                            parse_formula(l_phi), set_arg(l_set)};
                      const bool holds = check_kp_instance(lvl, inst);
                      r.ok = holds;
                      r.verdicts = {{"holds", holds}};
                      return r;
                    });
    kp->add_option("--base", l_base);
    kp->add_option("-n", l_n)->required();
    kp->add_option("--kind", l_kind, "separation or collection");
    kp->add_option("--formula", l_phi)->required();
    kp->add_option("--set", l_set)->required();
    auto* rk = leaf(l, "rank", "level of a proof's code", {"proof_rank"}, [this] {
      inputs["proof"] = digest(read_file(l_proof));
      inputs["base"] = digest_of(l_base);
      auto r = start("lhier rank");
      const auto proof = parse_file(l_proof, [](std::string_view t) { return parse_proof(t); });
      const Signature sig{set_arg(l_base), {}};
      r.findings.push_back({{"nodes", proof.node_count()}, {"proof_rank", proof_rank(proof, sig)}});
      return r;
    });
    rk->add_option("proof", l_proof)->required();
    rk->add_option("--base", l_base);
  }

  // -- force ---------------------------------------------------------------------

  std::string fp_file, fp_base = "#3", fp_atom, fp_name = "generic", fp_phi, fp_cond;
  std::vector<std::string> fp_assign;
  std::size_t fa_max = 5, fa_samples = 3;

  Poset poset_arg() {
    inputs["poset"] = digest(read_file(fp_file));
    return parse_file(fp_file, [](std::string_view t) { return parse_poset(t); });
  }

  Filter generic_arg(const Poset& P) {
    const auto a = label_index(P, fp_atom);
    const auto G = upward_closure(P, a);
    if (!generic_atom(P, G)) throw ValidationError(fp_atom + " is not an atom");
    return G;
  }

  void add_force() {
    auto* f = app.add_subcommand("force", "forcing over finite structures");
    f->require_subcommand(1);
    leaf(f, "generics", "atoms and generic filters", {"atoms", "generic_filters"}, [this] {
      const auto P = poset_arg();
      auto r = start("force generics");
      Json atoms_j = Json::array(), gens = Json::array();
      for (auto a : atoms(P)) atoms_j.push_back(to_string(P.label(a)));
      for (const auto& G : generic_filters(P)) gens.push_back(filter_json(P, G));
      r.findings.push_back({{"conditions", P.size()}, {"atoms", atoms_j}, {"generics", gens}});
      return r;
    })->add_option("poset", fp_file)->required();
    leaf(f, "ccc", "largest antichain", {"is_ccc"}, [this] {
      const auto P = poset_arg();
      auto r = start("force ccc");
      const auto c = is_ccc(P);
      Json w = Json::array();
      for (auto i : c.witness) w.push_back(to_string(P.label(i)));
      r.findings.push_back({{"ccc", c.ccc}, {"max_antichain", c.max_antichain}, {"witness", w}});
      return r;
    })->add_option("poset", fp_file)->required();
    auto* ev = leaf(f, "eval", "value of a name under the generic through an atom", {"eval_name"},
                    [this] {
                      const auto P = poset_arg();
                      inputs["atom"] = fp_atom;
                      inputs["name"] = fp_name;
                      auto r = start("force eval");
                      const auto G = generic_arg(P);
                      const auto n = fp_name == "generic" ? generic_name(P) : check_name(set_arg(fp_name), P);
                      r.findings.push_back({{"filter", filter_json(P, G)},
                                            {"name_rank", n.rank()},
                                            {"value", to_string(eval_name(n, G))}});
                      return r;
                    });
    ev->add_option("poset", fp_file)->required();
    ev->add_option("--atom", fp_atom)->required();
    ev->add_option("--name", fp_name, "generic, or a set for its check name");
    auto* ex = leaf(f, "extend", "the extension M[G]", {"extension"}, [this] {
      const auto P = poset_arg();
      inputs["base"] = digest_of(fp_base);
      inputs["atom"] = fp_atom;
      auto r = start("force extend");
      const FiniteStructure M(set_arg(fp_base));
      const auto G = generic_arg(P);
      const auto E = extension(M, P, G, cfg.name_cap);
      Json added = Json::array();
      for (const auto& x : E.domain().elements())
        if (!M.domain().contains(x)) added.push_back(to_string(x));
      r.findings.push_back({{"filter", filter_json(P, G)},
                            {"ground_size", M.domain().size()},
                            {"extension_size", E.domain().size()},
                            {"new", added}});
      return r;
    });
    ex->add_option("poset", fp_file)->required();
    ex->add_option("--base", fp_base);
    ex->add_option("--atom", fp_atom)->required();
    auto* rel = leaf(f, "relation", "semantic and syntactic forcing per condition",
                     {"forces_semantic", "forces_syntactic"}, [this] {
                       const auto P = poset_arg();
                       inputs["base"] = digest_of(fp_base);
                       inputs["formula"] = fp_phi;
                       inputs["condition"] = fp_cond;
                       inputs["assign"] = fp_assign;
                       auto r = start("force relation");
                       const FiniteStructure M(set_arg(fp_base));
                       ForcingQuery q{M, P, standard_namespace(M, P, cfg.name_cap), {}};
                       for (const auto& a : fp_assign) {
                         const auto eq = a.find('=');
                         if (eq == std::string::npos) throw ValidationError("assignment must be VAR=NAME: " + a);
                         const auto val = a.substr(eq + 1);
                         const auto n = val == "generic" ? generic_name(P) : check_name(set_arg(val), P);
                         q.ns.add(n);
                         q.env.emplace(a.substr(0, eq), n);
                       }
                       const auto phi = parse_formula(fp_phi);
                       std::size_t disagreements = 0;
                       for (std::size_t p = 0; p < P.size(); ++p) {
                         if (!fp_cond.empty() && p != label_index(P, fp_cond)) continue;
                         const bool syn = forces_syntactic(p, phi, q);
                         const bool sem = forces_semantic(p, phi, q);
                         disagreements += syn != sem;
                         r.findings.push_back({{"condition", to_string(P.label(p))},
                                               {"syntactic", syn},
                                               {"semantic", sem}});
                       }
                       r.ok = disagreements == 0;
                       r.verdicts = {{"disagreements", disagreements}};
                       return r;
                     });
    rel->add_option("poset", fp_file)->required();
    rel->add_option("--base", fp_base);
    rel->add_option("--formula", fp_phi)->required();
    rel->add_option("--condition", fp_cond);
    rel->add_option("--assign", fp_assign, "VAR=generic or VAR=SET");
    auto* ma = leaf(f, "ma-check", "absolute Martin's axiom over a pool", {"absolute_ma_check"}, [this] {
      const auto P = poset_arg();
      inputs["base"] = digest_of(fp_base);
      auto r = start("force ma-check");
      const FiniteStructure M(set_arg(fp_base));
      const auto rep = absolute_ma_check(M, P, pool_or({}), cfg.name_cap);
      for (const auto& e : rep.entries) {
        Json j{{"formula", to_string(e.phi)}, {"antecedent", e.antecedent}, {"consequent", e.consequent}};
        if (e.condition) j["condition"] = to_string(P.label(*e.condition));
        if (e.witness) j["witness"] = to_string(*e.witness);
        r.findings.push_back(j);
      }
      r.ok = rep.holds();
      r.verdicts = {{"holds", rep.holds()}, {"max_antichain", rep.ccc.max_antichain}};
      return r;
    });
    ma->add_option("poset", fp_file)->required();
    ma->add_option("--base", fp_base);
    auto* au = leaf(f, "audit", "forcing theorem over every small poset", {}, [this] {
      return force_audit(cfg, fa_max, fa_samples);
    });
    au->add_option("--max-conditions", fa_max);
    au->add_option("--assignments", fa_samples, "sampled name assignments per formula");
  }

  // -- lab -----------------------------------------------------------------------

  std::string m_base = "#2", m_inner, m_outer, m_theory;
  std::size_t m_kappa = 2, m_count = 20, m_max = 24;
  unsigned m_cap = 5;
  bool m_forcing_only = false;

  UniverseModel model_arg(const std::string& s, const char* key) {
    inputs[key] = digest_of(s);
    return UniverseModel(set_arg(s));
  }

  void add_lab() {
    auto* l = app.add_subcommand("lab", "outer and inner models, IMH, covering, geology");
    l->require_subcommand(1);
    leaf(l, "outer", "outer models inside the budget stage", {"outer_models"}, [this] {
      const auto M = model_arg(m_base, "base");
      auto r = start("lab outer");
      for (const auto& W : outer_models(M, cfg.stage)) r.findings.push_back(model_json(W));
      r.verdicts = {{"count", r.findings.size()}};
      return r;
    })->add_option("--base", m_base);
    leaf(l, "inner", "inner models", {"inner_models"}, [this] {
      const auto M = model_arg(m_base, "base");
      auto r = start("lab inner");
      for (const auto& W : inner_models(M)) r.findings.push_back(model_json(W));
      r.verdicts = {{"count", r.findings.size()}};
      return r;
    })->add_option("--base", m_base);
    auto* imh = leaf(l, "imh", "inner model hypothesis over a sentence pool", {"imh_check"}, [this] {
      const auto M = model_arg(m_base, "base");
      inputs["forcing_only"] = m_forcing_only;
      auto r = start("lab imh");
      const auto pool = pool_or({parse_formula("exists x . exists y in x . exists z in y . exists w in z . w = w")});
      const auto rep = imh_check(M, pool, cfg.stage,
                                 m_forcing_only ? OuterRange::kForcingOnly : OuterRange::kAllOuter,
                                 m_cap);
      for (const auto& e : rep.entries) {
        Json j{{"sentence", to_string(e.phi)}, {"antecedent", e.antecedent}, {"consequent", e.consequent}};
        if (e.outer) j["outer"] = to_string(*e.outer);
        if (e.outer_inner) j["outer_inner"] = to_string(*e.outer_inner);
        if (e.inner) j["inner"] = to_string(*e.inner);
        r.findings.push_back(j);
      }
      r.ok = rep.holds();
      r.verdicts = {{"holds", rep.holds()}, {"outer_models", rep.outer_count}};
      return r;
    });
    imh->add_option("--base", m_base);
    imh->add_flag("--forcing-only", m_forcing_only);
    imh->add_option("--cap", m_cap, "poset size for forcing extensions");
    auto* cov = leaf(l, "covering", "global covering of V by W", {"global_covers", "covering_failure"},
                     [this] {
                       const auto W = model_arg(m_inner, "inner");
                       const auto V = model_arg(m_outer, "outer");
                       inputs["kappa"] = m_kappa;
                       auto r = start("lab covering");
                       const ModelPair pair(W, V);
                       const bool covers = global_covers(pair.inner, pair.outer, m_kappa);
                       r.verdicts = {{"covers", covers}};
                       if (auto f = covering_failure(pair.inner, pair.outer, m_kappa))
                         r.findings.push_back({{"d", to_string(f->d)},
                                               {"w_atom", to_string(f->w_atom)},
                                               {"v_atoms", f->v_atoms}});
                       return r;
                     });
    cov->add_option("--inner", m_inner)->required();
    cov->add_option("--outer", m_outer)->required();
    cov->add_option("--kappa", m_kappa);
    auto* geo = leaf(l, "geology", "grounds, mantle and the ground axiom",
                     {"grounds", "mantle", "ground_axiom"}, [this] {
                       const auto M = model_arg(m_base, "base");
                       inputs["cap"] = m_cap;
                       auto r = start("lab geology");
                       const auto gs = grounds(M, m_cap);
                       for (const auto& g : gs) {
                         Json j = model_json(g.W);
                         j["trivial"] = g.trivial();
                         j["poset"] = write_poset(g.P);
                         j["filter"] = filter_json(g.P, g.G);
                         r.findings.push_back(j);
                       }
                       r.verdicts = {{"grounds", gs.size()},
                                     {"ground_axiom", ground_axiom(M, m_cap)},
                                     {"mantle", model_json(mantle(M, m_cap))}};
                       return r;
                     });
    geo->add_option("--base", m_base);
    geo->add_option("--cap", m_cap);
    leaf(l, "barwise", "refutation and outer-model search on a theory", {"barwise_correspondence"},
         [this] {
           inputs["theory"] = digest(read_file(m_theory));
           auto r = start("lab barwise");
           const auto tf = parse_file(m_theory, [](std::string_view t) { return parse_theory(t); });
           BarwiseBudget b;
           b.depth = cfg.depth;
           b.stage = cfg.stage;
           const auto rep = barwise_correspondence(tf.theory, tf.sig, UniverseModel(tf.sig.base), b);
           Json f{{"theory", tf.theory.name()}, {"proof", proof_json(rep.proof)}};
           if (rep.model) f["model"] = to_string(rep.model->domain());
           r.findings.push_back(f);
           r.ok = !rep.forbidden();
           r.verdicts = {{"refuted", rep.refuted}, {"model_found", rep.model_found}};
           return r;
         })->add_option("theory", m_theory)->required();
    auto* fl = leaf(l, "fleet", "covering and geology on seeded forcing pairs", {}, [this] {
      return lab_fleet(cfg, m_count, m_max);
    });
    fl->add_option("--count", m_count);
    fl->add_option("--max-size", m_max, "largest extension kept");
  }
};

}  // namespace

const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> table = Cli().table;
  return table;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    cli.app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return cli.app.exit(e, out, err) == 0 ? 0 : 2;
  }
  try {
    cli.finish_config();
    const auto t0 = Clock::now();
    Report r = cli.action();
    if (r.runtime_seconds == 0)
      r.runtime_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    const std::string text = cli.cfg.format == "json" ? r.to_json().dump(2) + "\n" : r.to_text();
    if (cli.out_path.empty()) {
      out << text;
    } else {
      std::filesystem::path p(cli.out_path);
      if (const char* dir = std::getenv("HFV_OUT_DIR"); dir && p.is_relative()) p = std::filesystem::path(dir) / p;
      std::ofstream f(p);
      if (!f) throw ValidationError("cannot write " + p.string());
      f << text;
    }
    if (!r.ok) {
      for (const auto& f : r.findings)
        if (f.contains("failing_path") && f.contains("diagnostic"))
          err << "rejected at node " << f["failing_path"].dump() << ": "
              << f["diagnostic"].get<std::string>() << "\n";
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hfv

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

#include "hfv/constructible.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "hfv/errors.hpp"

namespace hfv {

const std::vector<Formula>& default_definability_pool() {
  static const std::vector<Formula> pool = [] {
    std::vector<Formula> out;
    for (const char* s : {
             "x = x",
             "x in p",
             "x = p",
             "(x in p or x = p)",
             "(x = p or x = q)",
             "(x in p or x in q)",
             "(x in p and x in q)",
             "(x in p and not x in q)",
             "exists y in p . x in y",
             "forall y in x . y in p",
             "x in M",
             "not x in M",
             "forall y in x . forall z in y . z in x",
             "exists y in x . y = y",
         })
      out.push_back(parse_formula(s));
    return out;
  }();
  return pool;
}

namespace {

FiniteStructure level_structure(const SetValue& domain, const FiniteStructure& base) {
  return FiniteStructure(domain).with_predicate("M", base.predicate("M"));
}

SetValue level_zero(const FiniteStructure& base) {
  return transitive_closure(singleton(base.domain()));
}

}  // namespace

LLevel l_level(const FiniteStructure& base, unsigned n, const LConfig& cfg) {
  if (n > cfg.level_cap)
    throw BudgetError("level", "level " + std::to_string(n) + " exceeds cap " +
                                   std::to_string(cfg.level_cap));
  const auto& pool = cfg.pool.empty() ? default_definability_pool() : cfg.pool;
  SetValue dom = level_zero(base);
  for (unsigned k = 0; k < n; ++k) {
    if (cfg.full_definability) {
      if (dom.size() >= 63 || (std::size_t{1} << dom.size()) > cfg.element_cap)
        throw BudgetError("elements", "level " + std::to_string(k + 1) + " has 2^" +
                                          std::to_string(dom.size()) + " elements");
      dom = powerset(dom, 63);
      continue;
    }
    FiniteStructure m = level_structure(dom, base);
    auto elems = dom.elements();
    std::size_t s = elems.size();
    std::size_t work = 0;
    for (const auto& phi : pool) {
      std::size_t params = free_vars(phi).size() - (free_vars(phi).contains("x") ? 1 : 0);
      std::size_t cost = s;
      for (std::size_t i = 0; i < params; ++i) cost *= s;
      work += cost;
    }
    if (work > cfg.work_cap)
      throw BudgetError("work", "defining level " + std::to_string(k + 1) + " needs " +
                                    std::to_string(work) + " evaluations");
    std::set<SetValue> next;
    for (const auto& phi : pool) {
      auto fv = free_vars(phi);
      std::vector<std::string> params;
      for (const auto& v : fv)
        if (v != "x") params.push_back(v);
      std::vector<std::size_t> idx(params.size(), 0);
      while (true) {
        Assignment asg;
        for (std::size_t i = 0; i < params.size(); ++i) asg[params[i]] = elems[idx[i]];
        std::vector<SetValue> members;
        for (const auto& x : elems) {
          asg["x"] = x;
          if (satisfies(m, phi, asg)) members.push_back(x);
        }
        next.insert(SetValue::of(std::move(members)));
        if (next.size() > cfg.element_cap)
          throw BudgetError("elements", "level " + std::to_string(k + 1) + " exceeds " +
                                            std::to_string(cfg.element_cap) + " elements");
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == s) idx[i++] = 0;
        if (i == idx.size()) break;
      }
    }
    // L_n ⊆ L_{n+1}: levels are transitive, so each old element is the set
    // defined by "x ∈ p".
    dom = SetValue::of(std::vector<SetValue>(next.begin(), next.end()));
  }
  return {n, dom, base};
}

unsigned exact_level(const SetValue& x, const FiniteStructure& base) {
  SetValue l0 = level_zero(base);
  std::unordered_map<SetValue, unsigned> memo;
  auto go = [&](auto& self, const SetValue& y) -> unsigned {
    if (l0.contains(y)) return 0;
    if (auto it = memo.find(y); it != memo.end()) return it->second;
    unsigned m = 0;
    for (const auto& z : y.elements()) m = std::max(m, self(self, z));
    memo.emplace(y, m + 1);
    return m + 1;
  };
  return go(go, x);
}

bool check_kp_instance(const LLevel& level, const KPInstance& inst) {
  if (!classify(inst.phi).is_delta0())
    throw ClassificationError("KP instance formula is not Δ0: " + to_string(inst.phi));
  if (!level.domain.contains(inst.a))
    throw ValidationError("parameter " + to_string(inst.a) + " is not in the level");
  // Δ0 truth is absolute, so evaluate in the transitive closure of the level.
  SetValue closure = set_union(level.domain, transitive_closure(level.domain));
  FiniteStructure m = level_structure(closure, level.base);
  if (inst.kind == KPInstance::kSeparation) {
    SetValue sep = filter(inst.a, [&](const SetValue& x) {
      return satisfies(m, inst.phi, {{inst.x, x}});
    });
    return level.domain.contains(sep);
  }
  auto holds = [&](const SetValue& x, const SetValue& y) {
    return satisfies(m, inst.phi, {{inst.x, x}, {inst.y, y}});
  };
  for (const auto& x : inst.a.elements()) {
    bool any = std::any_of(level.domain.elements().begin(), level.domain.elements().end(),
                           [&](const SetValue& y) { return holds(x, y); });
    if (!any) return true;  // the hypothesis fails
  }
  for (const auto& b : level.domain.elements()) {
    bool bounds = std::all_of(inst.a.elements().begin(), inst.a.elements().end(),
                              [&](const SetValue& x) {
                                return std::any_of(b.elements().begin(), b.elements().end(),
                                                   [&](const SetValue& y) { return holds(x, y); });
                              });
    if (bounds) return true;
  }
  return false;
}

// -- proof codes --------------------------------------------------------------

SetValue encode_proof(const ProofTree& p, const Signature& sig) {
  const Justification& j = p.justification();
  SetValue tag = ordinal(static_cast<unsigned>(j.tag));
  if (j.tag == JustTag::kSet) tag = kpair(ordinal(5), *j.set);
  std::vector<SetValue> kids;
  for (const auto& c : p.children()) kids.push_back(encode_proof(c, sig));
  SetValue f = encode_formula(p.conclusion(), sig, free_vars(p.conclusion()));
  return kpair(f, kpair(tag, encode_sequence(kids)));
}

ProofTree decode_proof(const SetValue& code, const Signature& sig) {
  auto outer = unpair(code);
  if (!outer) throw DecodeError("proof code is not a pair");
  auto inner = unpair(outer->second);
  if (!inner) throw DecodeError("proof code body is not a pair");
  Justification j;
  if (auto k = ordinal_value(inner->first); k && *k <= 6 && *k != 5) {
    j.tag = static_cast<JustTag>(*k);
  } else if (auto s = unpair(inner->first); s && s->first == ordinal(5)) {
    j = Justification::set_rule(s->second);
  } else {
    throw DecodeError("unknown justification tag " + to_string(inner->first));
  }
  std::vector<ProofTree> kids;
  for (const auto& c : decode_sequence(inner->second)) kids.push_back(decode_proof(c, sig));
  return ProofTree(decode_formula(outer->first, sig), j, std::move(kids));
}

unsigned proof_rank(const ProofTree& p, const Signature& sig, unsigned cap) {
  unsigned lev = exact_level(encode_proof(p, sig), base_structure(sig));
  if (lev > cap)
    throw BudgetError("proof-rank", "proof code first appears at level " + std::to_string(lev) +
                                        ", past cap " + std::to_string(cap));
  return lev;
}

}  // namespace hfv

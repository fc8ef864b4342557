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

#include "hfv/multiverse_lab.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "hfv/errors.hpp"

namespace hfv {

// -- T_fin ----------------------------------------------------------------------

namespace {

SetValue separate_ordinals(const SetValue& x) { return filter(x, is_ordinal); }
SetValue separate_transitive(const SetValue& x) { return filter(x, is_transitive); }

}  // namespace

SetValue tfin_closure(const SetValue& seed, std::size_t max_elements) {
  std::vector<SetValue> all;
  std::unordered_set<SetValue> have;
  const auto add = [&](SetValue s) {
    if (have.insert(s).second) {
      all.push_back(std::move(s));
      if (all.size() > max_elements)
        throw BudgetError("elements", "T_fin closure exceeds " + std::to_string(max_elements) + " elements");
    }
  };
  const auto start = transitive_closure(seed);
  for (const auto& x : start.elements()) add(x);
  std::size_t fresh = 0;
  while (fresh < all.size()) {
    const std::size_t end = all.size();
    unsigned h = 0;
    while (have.count(ordinal(h))) ++h;
    for (std::size_t i = fresh; i < end; ++i) {
      const SetValue x = all[i];
      add(big_union(x));
      add(separate_ordinals(x));
      add(separate_transitive(x));
    }
    for (std::size_t i = 0; i < end; ++i)
      for (std::size_t j = std::max(i, fresh); j < end; ++j) {
        // Pairs with at least one member from the last round.
        const SetValue x = all[i];
        const SetValue y = all[j];
        add(difference(x, y));
        add(difference(y, x));
        if (std::max(x.rank(), y.rank()) + 1 < h) add(unordered_pair(x, y));
      }
    fresh = end;
    // A new ordinal lets earlier pairs in; rescan them next round.
    unsigned h2 = h;
    while (have.count(ordinal(h2))) ++h2;
    if (h2 != h) fresh = 0;
  }
  return SetValue::of(std::move(all));
}

std::optional<std::string> tfin_violation(const SetValue& d) {
  if (!is_transitive(d)) return "not transitive";
  const unsigned h = ordinal_height(d);
  const auto need = [&](const SetValue& s, const std::string& what) -> std::optional<std::string> {
    if (d.contains(s)) return std::nullopt;
    return what + " " + to_string(s) + " missing";
  };
  for (const auto& x : d.elements()) {
    if (auto v = need(big_union(x), "union")) return v;
    if (auto v = need(separate_ordinals(x), "ordinal separation")) return v;
    if (auto v = need(separate_transitive(x), "transitive separation")) return v;
    for (const auto& y : d.elements()) {
      if (auto v = need(difference(x, y), "difference")) return v;
      if (std::max(x.rank(), y.rank()) + 1 < h)
        if (auto v = need(unordered_pair(x, y), "pair")) return v;
    }
  }
  return std::nullopt;
}

UniverseModel::UniverseModel(SetValue domain) : structure_(domain) {
  if (auto v = tfin_violation(domain)) throw ValidationError("not a T_fin model: " + *v);
}

UniverseModel UniverseModel::closure_of(const SetValue& seed) {
  return UniverseModel(tfin_closure(seed));
}

ModelPair::ModelPair(UniverseModel in, UniverseModel out)
    : inner(std::move(in)), outer(std::move(out)) {
  if (!is_subset(inner.domain(), outer.domain())) throw ValidationError("inner model not contained in outer");
  if (inner.height() != outer.height()) throw ValidationError("models have different ordinals");
  // End extension: no new element of an inner set.
  for (const auto& x : inner.domain().elements())
    for (const auto& y : x.elements())
      if (!inner.domain().contains(y)) throw ValidationError("outer model is not an end extension");
}

// -- outer and inner models -----------------------------------------------------

namespace {

// All T_fin models between `lower` and `upper` (a superset known to bound
// the search) with lower's ordinals. `within` filters closures that escape.
std::vector<UniverseModel> models_between(const SetValue& lower, const SetValue& upper,
                                          std::size_t max_models) {
  const unsigned h = ordinal_height(lower);
  std::set<SetValue> found{lower};
  std::vector<SetValue> queue{lower};
  while (!queue.empty()) {
    const SetValue W = queue.back();
    queue.pop_back();
    for (const auto& e : upper.elements()) {
      if (W.contains(e)) continue;
      const auto c = tfin_closure(set_union(W, singleton(e)));
      if (!is_subset(c, upper) || ordinal_height(c) != h) continue;
      if (found.insert(c).second) {
        if (found.size() > max_models)
          throw BudgetError("models", "more than " + std::to_string(max_models) + " models");
        queue.push_back(c);
      }
    }
  }
  std::vector<UniverseModel> out;
  for (const auto& d : found) out.emplace_back(d);
  return out;
}

}  // namespace

std::vector<UniverseModel> outer_models(const UniverseModel& M, unsigned budget_stage,
                                        std::size_t max_models) {
  if (budget_stage > 4) throw BudgetError("stage", "outer-model search above V_4");
  const auto V = stage(budget_stage);
  if (!is_subset(M.domain(), V)) throw ValidationError("model is not inside the budget stage");
  auto out = models_between(M.domain(), V, max_models);
  std::stable_partition(out.begin(), out.end(), [&](const UniverseModel& w) { return w == M; });
  return out;
}

UniverseModel ordinal_core(const UniverseModel& M) {
  return UniverseModel::closure_of(ordinal(M.height()));
}

std::vector<UniverseModel> inner_models(const UniverseModel& M) {
  auto out = models_between(ordinal_core(M).domain(), M.domain(), 1u << 16);
  std::stable_partition(out.begin(), out.end(), [&](const UniverseModel& w) { return !(w == M); });
  return out;
}

UniverseModel forcing_extension(const UniverseModel& W, const Poset& P, const Filter& G,
                                unsigned cap) {
  const auto ext = extension(W.structure(), P, G, cap);
  const auto d = tfin_closure(ext.domain());
  if (ordinal_height(d) != W.height()) throw ValidationError("closure of the extension gains an ordinal");
  return UniverseModel(d);
}

namespace {

// Label sets in W usable for a poset with at most `cap` conditions.
std::vector<SetValue> label_sets(const UniverseModel& W, unsigned cap) {
  std::vector<SetValue> out;
  const auto core = ordinal(W.height());
  for (const auto& L : W.domain().elements())
    if (L.size() >= 3 && L.size() <= cap && !is_subset(core, L)) out.push_back(L);
  return out;
}

// A poset on L whose generic filter through its first atom has label set S
// (top ∈ S ⊊ L): a chain through S, the rest of L as atoms under the top.
std::pair<Poset, Filter> poset_for(const SetValue& L, const SetValue& S) {
  std::vector<SetValue> labels(S.elements().begin(), S.elements().end());
  const std::size_t chain = labels.size();
  for (const auto& l : L.elements())
    if (!S.contains(l)) labels.push_back(l);
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t i = 1; i < chain; ++i) order.emplace_back(i, i - 1);
  for (std::size_t i = chain; i < labels.size(); ++i) order.emplace_back(i, 0);
  Poset P(std::move(labels), order);
  auto G = upward_closure(P, chain - 1);
  return {std::move(P), std::move(G)};
}

void require_sentence(const Formula& phi) {
  if (!is_sentence(phi)) throw MalformedFormula("pool formula is not a sentence: " + to_string(phi));
  if (!constants(phi).empty()) throw MalformedFormula("pool sentence has parameters: " + to_string(phi));
}

}  // namespace

bool ImhReport::holds() const {
  return std::all_of(entries.begin(), entries.end(), [](const ImhEntry& e) { return e.holds(); });
}

ImhReport imh_check(const UniverseModel& M, const std::vector<Formula>& pool, unsigned budget,
                    OuterRange range, unsigned cap) {
  for (const auto& phi : pool) require_sentence(phi);
  std::vector<UniverseModel> outers;
  if (range == OuterRange::kAllOuter) {
    outers = outer_models(M, budget);
  } else {
    outers.push_back(M);
    std::set<SetValue> seen{M.domain()};
    for (const auto& L : label_sets(M, cap)) {
      const auto subsets = powerset(L);
      for (const auto& S : subsets.elements()) {
        if (S.empty() || S == L || M.domain().contains(S)) continue;
        auto [P, G] = poset_for(L, S);
        try {
          auto E = forcing_extension(M, P, G, cap);
          if (seen.insert(E.domain()).second) outers.push_back(std::move(E));
        } catch (const ValidationError&) {
        }
      }
    }
  }
  ImhReport rep;
  rep.outer_count = outers.size();
  std::vector<std::vector<UniverseModel>> inners;
  for (const auto& O : outers) inners.push_back(inner_models(O));
  const auto& own = inners.front();  // outers[0] is M
  for (const auto& phi : pool) {
    ImhEntry e{phi, false, std::nullopt, std::nullopt, false, std::nullopt};
    for (std::size_t k = 0; k < outers.size() && !e.antecedent; ++k)
      for (const auto& I : inners[k])
        if (satisfies(I.structure(), phi)) {
          e.antecedent = true, e.outer = outers[k].domain(), e.outer_inner = I.domain();
          break;
        }
    for (const auto& I : own)
      if (satisfies(I.structure(), phi)) {
        e.consequent = true, e.inner = I.domain();
        break;
      }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

// -- covering ---------------------------------------------------------------------

std::vector<SetValue> atoms_of(const SetValue& d, const SetValue& m) {
  std::vector<SetValue> pieces{d};
  for (const auto& s : m.elements())
    if (is_subset(s, d)) pieces.push_back(s);
  std::vector<SetValue> out;
  for (const auto& i : d.elements()) {
    SetValue a = d;
    for (const auto& s : pieces)
      if (s.contains(i)) a = intersection(a, s);
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::optional<CoverFailure> failure_on(const UniverseModel& W, const UniverseModel& V,
                                       const SetValue& d, std::size_t kappa) {
  if (d.empty()) return std::nullopt;
  const auto fine = atoms_of(d, V.domain());
  for (const auto& a : atoms_of(d, W.domain())) {
    std::size_t n = 0;
    for (const auto& b : fine) n += is_subset(b, a);
    if (n >= kappa) return CoverFailure{d, a, n};
  }
  return std::nullopt;
}

}  // namespace

std::optional<CoverFailure> covering_failure(const UniverseModel& W, const UniverseModel& V,
                                             std::size_t kappa) {
  for (const auto& d : W.domain().elements())
    if (auto f = failure_on(W, V, d, kappa)) return f;
  return std::nullopt;
}

bool covers_on(const UniverseModel& W, const UniverseModel& V, const SetValue& d,
               std::size_t kappa) {
  return !failure_on(W, V, d, kappa);
}

bool global_covers(const UniverseModel& W, const UniverseModel& V, std::size_t kappa) {
  return !covering_failure(W, V, kappa);
}

// -- geology ----------------------------------------------------------------------

std::vector<Ground> grounds(const UniverseModel& M, unsigned cap) {
  std::vector<Ground> out;
  out.push_back(Ground{M, Poset({empty_set()}, {}), Filter{true}});
  for (const auto& W : inner_models(M)) {
    if (W == M) continue;
    std::optional<Ground> found;
    for (const auto& L : label_sets(W, cap)) {
      const auto subsets = powerset(L);
      for (const auto& S : subsets.elements()) {
        if (S.empty() || S == L || W.domain().contains(S) || !M.domain().contains(S)) continue;
        auto [P, G] = poset_for(L, S);
        try {
          if (forcing_extension(W, P, G, cap) == M) found = Ground{W, std::move(P), std::move(G)};
        } catch (const ValidationError&) {
        }
        if (found) break;
      }
      if (found) break;
    }
    if (found) out.push_back(std::move(*found));
  }
  return out;
}

UniverseModel mantle(const UniverseModel& M, unsigned cap) {
  SetValue meet = M.domain();
  for (const auto& g : grounds(M, cap)) meet = intersection(meet, g.W.domain());
  return UniverseModel::closure_of(meet);
}

bool ground_axiom(const UniverseModel& M, unsigned cap) { return grounds(M, cap).size() == 1; }

// -- Barwise correspondence ---------------------------------------------------------

std::optional<FiniteStructure> find_outer_model(const Theory& th, const Signature& sig,
                                                const UniverseModel& M, unsigned stage,
                                                std::size_t max_models) {
  if (!(sig.base == M.domain())) throw ValidationError("signature base is not the model's domain");
  if (sig.extras.size() > 1) throw ValidationError("at most one extra predicate");
  const auto outers = outer_models(M, stage);
  const auto holds = [&](const FiniteStructure& s) {
    for (const auto& phi : th.sentences())
      if (!satisfies(s, phi)) return false;
    return true;
  };
  std::size_t tried = 0;
  for (const auto& D : outers) {
    const auto s = FiniteStructure(D.domain()).with_predicate("M", M.domain());
    if (sig.extras.empty()) {
      if (++tried > max_models) return std::nullopt;
      if (holds(s)) return s;
      continue;
    }
    for (const auto& W : outers) {
      if (!is_subset(W.domain(), D.domain())) continue;
      if (++tried > max_models) return std::nullopt;
      auto sw = s.with_predicate(sig.extras[0], W.domain());
      if (holds(sw)) return sw;
    }
  }
  return std::nullopt;
}

BarwiseReport barwise_correspondence(const Theory& th, const Signature& sig,
                                     const UniverseModel& M, const BarwiseBudget& budget) {
  BarwiseReport r;
  r.proof = refutation_search(th, sig, budget.depth, budget.search);
  r.refuted = r.proof.has_value();
  r.model = find_outer_model(th, sig, M, budget.stage, budget.max_models);
  r.model_found = r.model.has_value();
  return r;
}

}  // namespace hfv

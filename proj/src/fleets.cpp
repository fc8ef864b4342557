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

#include "hfv/fleets.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "hfv/errors.hpp"

namespace hfv {

Namespace rank2_names(const Poset& P, unsigned seed, std::size_t extra) {
  Namespace ns;
  std::vector<PName> r1;
  for (std::uint32_t s = 0; s < (1u << P.size()); ++s) {
    std::vector<std::pair<PName, std::size_t>> cons;
    for (std::size_t p = 0; p < P.size(); ++p)
      if (s >> p & 1u) cons.emplace_back(PName(), p);
    r1.push_back(PName::of(std::move(cons)));
    ns.add(r1.back());
  }
  for (const auto& m : r1)
    for (std::size_t p = 0; p < P.size(); ++p) ns.add(PName::of({{m, p}}));
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_m(0, r1.size() - 1), pick_p(0, P.size() - 1);
  for (std::size_t i = 0; i < extra; ++i)
    ns.add(PName::of({{r1[pick_m(rng)], pick_p(rng)}, {r1[pick_m(rng)], pick_p(rng)}}));
  ns.add(check_name(ordinal(2), P));
  ns.add(generic_name(P));
  return ns;
}

// Free variables a, b (names) and g (the generic name).

const std::vector<std::string>& forcing_formula_texts() {
  static const std::vector<std::string> texts = {
      "a in b",
      "a = b",
      "not a in b",
      "(a in b or b in a)",
      "(a in b and not a = b)",
      "forall x in a . x in b",
      "exists x in a . x in b",
      "exists x in a . not x in b",
      "forall x in a . exists y in b . x = y",
      "exists x in b . a in x",
      "a in g",
      "#0 in a",
      "#1 in a",
      "forall x in a . x = #0",
      "exists x in g . x in a",
      "a in M",
      "forall x in a . x in M",
      "(a in b implies b in g)",
      "not (a = b or a in g)",
      "exists x in a . exists y in x . y in b",
      "forall x in b . forall y in x . y in a",
      "exists x . x in a",
      "exists x . (x in a and x in b)",
      "exists x . (a in x and b in x)",
      "exists x . forall y in x . y in a",
      "exists x . (x = a and not x in M)",
      "exists x . (x in g and not x in a)",
      "exists x . forall y in a . y in x",
      "exists x . (not x in M and forall y in x . y in g)",
      "exists x . exists z in x . z = a",
  };
  return texts;
}

std::vector<ForcingPair> forcing_pairs(unsigned seed, std::size_t count, std::size_t max_size) {
  const auto V4 = stage(4);
  const auto e = V4.elements();
  std::mt19937 rng(seed);
  std::set<SetValue> seen;
  std::vector<ForcingPair> out;
  for (int attempt = 0; attempt < 20000 && out.size() < count; ++attempt) {
    std::vector<SetValue> xs, ys;
    for (const auto& v : e) {
      if (rng() % 4 == 0) xs.push_back(v);
      if (rng() % 5 == 0) ys.push_back(v);
    }
    SetValue d;
    try {
      d = tfin_closure(make_set({make_set(xs), make_set(ys)}), 3000);
    } catch (const BudgetError&) {
      continue;
    }
    if (!seen.insert(d).second) continue;
    const UniverseModel W(d);
    bool done = false;
    for (const auto& L : d.elements()) {
      if (done) break;
      if (L.size() < 3 || L.size() > 5 || is_subset(ordinal(W.height()), L)) continue;
      const auto subsets = powerset(L);
      for (const auto& S : subsets.elements()) {
        if (S.empty() || S == L || d.contains(S)) continue;
        // Chain through S with the rest of L as atoms under the top; the
        // order of S's elements is drawn at random.
        std::vector<SetValue> labels(S.elements().begin(), S.elements().end());
        std::shuffle(labels.begin(), labels.end(), rng);
        const std::size_t chain = labels.size();
        for (const auto& l : L.elements())
          if (!S.contains(l)) labels.push_back(l);
        std::vector<std::pair<std::size_t, std::size_t>> order;
        for (std::size_t i = 1; i < chain; ++i) order.emplace_back(i, i - 1);
        for (std::size_t i = chain; i < labels.size(); ++i) order.emplace_back(i, rng() % chain);
        try {
          Poset P(labels, order);
          auto G = upward_closure(P, chain - 1);
          if (!generic_atom(P, G)) continue;
          auto E = forcing_extension(W, P, G, 8);
          if (E.domain().size() > max_size) continue;
          out.push_back({W, std::move(P), std::move(G), std::move(E)});
          done = true;
          break;
        } catch (const ValidationError&) {
        }
      }
    }
  }
  return out;
}

}  // namespace hfv

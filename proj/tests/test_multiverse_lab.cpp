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

#include <algorithm>
#include <functional>

#include "doctest.h"
#include "hfv/errors.hpp"
#include "hfv/multiverse_lab.hpp"
#include "lab_fleet.hpp"

using namespace hfv;

namespace {

std::vector<SetValue> domains(const std::vector<UniverseModel>& ms) {
  std::vector<SetValue> out;
  for (const auto& m : ms) out.push_back(m.domain());
  std::sort(out.begin(), out.end());
  return out;
}

Formula P(const char* s) { return parse_formula(s); }

// Brute force over functions d → R with fibres in V and candidate covers
// g with fibres in W and |g(i)| < κ.
bool covers_by_functions(const UniverseModel& W, const UniverseModel& V, const SetValue& d,
                         std::size_t kappa) {
  const auto dom = d.elements();
  const std::size_t n = dom.size();
  std::vector<SetValue> R(W.domain().elements().begin(), W.domain().elements().begin() + n);
  const auto fibres_in = [&](const std::vector<std::size_t>& f, const SetValue& m) {
    for (std::size_t v = 0; v <= 8; ++v) {
      std::vector<SetValue> fib;
      for (std::size_t i = 0; i < n; ++i)
        if (f[i] == v) fib.push_back(dom[i]);
      if (!fib.empty() && !m.contains(SetValue::of(fib))) return false;
    }
    return true;
  };
  std::vector<std::uint32_t> small;  // nonempty subsets of R with fewer than κ members
  for (std::uint32_t s = 1; s < (1u << n); ++s)
    if (static_cast<std::size_t>(std::popcount(s)) < kappa) small.push_back(s);
  std::vector<std::size_t> f(n, 0);
  std::function<bool(std::size_t)> each_f = [&](std::size_t i) -> bool {
    if (i == n) {
      if (!fibres_in(f, V.domain())) return true;
      std::vector<std::size_t> g(n, 0);
      std::function<bool(std::size_t)> some_g = [&](std::size_t j) -> bool {
        if (j == n) {
          std::vector<std::size_t> cls(n);
          for (std::size_t k = 0; k < n; ++k) cls[k] = g[k];
          // Fibres of g, keyed by the chosen subset's index.
          for (std::size_t a = 0; a < small.size(); ++a) {
            std::vector<SetValue> fib;
            for (std::size_t k = 0; k < n; ++k)
              if (g[k] == a) fib.push_back(dom[k]);
            if (!fib.empty() && !W.domain().contains(SetValue::of(fib))) return false;
          }
          return true;
        }
        for (std::size_t a = 0; a < small.size(); ++a) {
          if (!(small[a] >> f[j] & 1u)) continue;
          g[j] = a;
          if (some_g(j + 1)) return true;
        }
        return false;
      };
      return some_g(0);
    }
    for (std::size_t v = 0; v < n; ++v) {
      f[i] = v;
      if (!each_f(i + 1)) return false;
    }
    return true;
  };
  return each_f(0);
}

}  // namespace

TEST_CASE("T_fin closure") {
  CHECK(tfin_closure(ordinal(2)) == ordinal(2));
  CHECK(tfin_closure(ordinal(3)) == stage(3));
  CHECK(tfin_violation(ordinal(3)).value() == "pair {{{}}} missing");
  CHECK_THROWS_AS(UniverseModel(ordinal(3)), ValidationError);
  CHECK_FALSE(tfin_violation(stage(3)));
  // Every closure is closed, and is the least closed superset in V_4.
  for (const auto& m : fleet::models_in_v4()) CHECK(tfin_closure(m) == m);
  std::size_t checked = 0;
  for (const auto& x : stage(4).elements()) {
    const auto c = tfin_closure(singleton(x));
    if (!is_subset(c, stage(4))) continue;
    for (const auto& m : fleet::models_in_v4())
      if (m.contains(x)) CHECK(is_subset(c, m));
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("outer and inner models agree with brute force inside V_4") {
  const auto& all = fleet::models_in_v4();
  CHECK(all.size() > 50);
  for (const auto& d : all) {
    const UniverseModel M(d);
    std::vector<SetValue> outer, inner;
    for (const auto& w : all) {
      if (ordinal_height(w) != M.height()) continue;
      if (is_subset(d, w)) outer.push_back(w);
      if (is_subset(w, d)) inner.push_back(w);
    }
    std::sort(outer.begin(), outer.end());
    std::sort(inner.begin(), inner.end());
    const auto om = outer_models(M, 4);
    CHECK(om.front() == M);
    CHECK(domains(om) == outer);
    const auto im = inner_models(M);
    CHECK(im.back() == M);
    CHECK(domains(im) == inner);
    CHECK(std::find(im.begin(), im.end(), ordinal_core(M)) != im.end());
    for (const auto& W : om) CHECK_NOTHROW(ModelPair(M, W));
  }
}

TEST_CASE("outer model examples") {
  const UniverseModel v3(stage(3));
  CHECK(outer_models(v3, 3).size() == 1);  // no room inside V_3
  const UniverseModel two(ordinal(2));
  REQUIRE(inner_models(two).size() == 1);
  CHECK(inner_models(two)[0] == two);

  // A curated base: {{1}} and {0,{1}} with their transitive closure.
  const auto six = UniverseModel::closure_of(parse_set("{{{{{}}}} {{} {{{}}}}}"));
  REQUIRE(six.domain().size() == 5);
  std::size_t oracle = 0;
  for (const auto& w : fleet::models_in_v4())
    oracle += is_subset(six.domain(), w) && ordinal_height(w) == six.height();
  CHECK(outer_models(six, 4).size() == oracle);
  MESSAGE("outer models of the curated base at budget 4: " << oracle);

  CHECK_THROWS_AS(outer_models(v3, 5), BudgetError);
  CHECK_THROWS_AS(ModelPair(UniverseModel(ordinal(2)), v3), ValidationError);
}

TEST_CASE("IMH") {
  const UniverseModel v3(stage(3));
  const auto deep = P("exists x . exists y in x . exists z in y . exists w in z . w = w");
  const auto small = P("exists x . forall y in x . not y = y");
  const auto at3 = imh_check(v3, {deep, small}, 3);
  CHECK(at3.outer_count == 1);
  CHECK(at3.holds());
  const auto at4 = imh_check(v3, {deep, small}, 4);
  CHECK(at4.outer_count > 1);
  CHECK_FALSE(at4.entries[0].holds());
  REQUIRE(at4.entries[0].outer_inner);
  CHECK(satisfies(FiniteStructure(*at4.entries[0].outer_inner), deep));
  CHECK(at4.entries[1].holds());
  CHECK(at4.entries[1].inner.has_value());
  // Only forcing extensions: V_3 has none, so the violation disappears.
  CHECK(imh_check(v3, {deep}, 4, OuterRange::kForcingOnly).holds());

  // A maximal model at budget 4 makes the schema trivial.
  const UniverseModel v4(stage(4));
  CHECK(outer_models(v4, 4).size() == 1);
  CHECK(imh_check(v4, {deep, small, P("not exists x . x = x")}, 4).holds());

  CHECK_THROWS_AS(imh_check(v3, {P("#1 in #2")}, 3), MalformedFormula);
}

TEST_CASE("IMH violations persist as the budget grows") {
  const std::vector<Formula> pool = {
      P("exists x . exists y in x . exists z in y . exists w in z . w = w"),
      P("exists x . exists y . (x in y and not exists z in y . z = z)"),
      P("exists x . (not x = x)"),
      P("forall x . forall y in x . exists z . z = y"),
      P("exists x . exists y . exists z . (x in y and y in z and not x in z)"),
  };
  std::size_t flips = 0;
  for (const auto& d : fleet::models_in_v4()) {
    if (d.rank() > 3) continue;
    const UniverseModel M(d);
    const auto a = imh_check(M, pool, 3);
    const auto b = imh_check(M, pool, 4);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!a.entries[i].holds()) CHECK_FALSE(b.entries[i].holds());
      flips += a.entries[i].holds() && !b.entries[i].holds();
    }
  }
  CHECK(flips > 0);
}

TEST_CASE("global covering") {
  for (const auto& d : fleet::models_in_v4()) {
    const UniverseModel M(d);
    CHECK(global_covers(M, M, 2));
    if (d.size() > 1) CHECK_FALSE(global_covers(M, M, 1));
  }
  // Atom criterion against brute force over functions on small domains.
  const auto pairs = fleet::forcing_pairs(3, 12, 40);
  REQUIRE(pairs.size() >= 10);
  std::size_t compared = 0, failures = 0;
  for (const auto& fp : pairs)
    for (const auto& d : fp.W.domain().elements()) {
      if (d.empty() || d.size() > 3) continue;
      for (std::size_t kappa = 1; kappa <= 3; ++kappa) {
        const bool crit = covers_on(fp.W, fp.E, d, kappa);
        CHECK(crit == covers_by_functions(fp.W, fp.E, d, kappa));
        failures += !crit;
        ++compared;
      }
    }
  CHECK(compared > 100);
  CHECK(failures > 0);
}

TEST_CASE("covering after forcing with small antichains") {
  const auto pairs = fleet::forcing_pairs(17, 60);
  REQUIRE(pairs.size() >= 40);
  std::size_t converse_checked = 0, converse_fail = 0;
  for (const auto& fp : pairs) {
    const auto k = is_ccc(fp.P).max_antichain;
    CHECK_FALSE(fp.E == fp.W);
    CHECK(global_covers(fp.W, fp.E, k + 1));
    ++converse_checked;
    converse_fail += global_covers(fp.W, fp.E, 2);
  }
  MESSAGE("pairs also covered at κ = 2: " << converse_fail << " of " << converse_checked);
}

TEST_CASE("geology") {
  const auto pairs = fleet::forcing_pairs(29, 6, 24);
  REQUIRE(pairs.size() == 6);
  for (const auto& fp : pairs) {
    const auto gs = grounds(fp.E, 5);
    REQUIRE_FALSE(gs.empty());
    CHECK(gs.front().W == fp.E);
    CHECK(gs.front().trivial());
    CHECK_FALSE(ground_axiom(fp.E, 5));
    bool found = false;
    for (const auto& g : gs) {
      if (g.trivial()) continue;
      CHECK(forcing_extension(g.W, g.P, g.G, 5) == fp.E);
      found = found || g.W == fp.W;
    }
    CHECK(found);
    const auto m = mantle(fp.E, 5);
    for (const auto& g : gs) CHECK(is_subset(m.domain(), g.W.domain()));
  }
  // Models inside V_4 have no nontrivial extensions, so satisfy the ground axiom.
  for (const auto& d : fleet::models_in_v4()) {
    const UniverseModel M(d);
    const auto gs = grounds(M, 5);
    CHECK(gs.size() == 1);
    CHECK(ground_axiom(M, 5));
    CHECK(mantle(M, 5) == M);
  }
}

TEST_CASE("Barwise correspondence") {
  const UniverseModel M(stage(3));
  const Signature sig{M.domain(), {"W0"}};
  const auto run = [&](std::vector<Formula> fs) {
    return barwise_correspondence(Theory("t", std::move(fs)), sig, M);
  };
  const auto empty = run({});
  CHECK_FALSE(empty.refuted);
  REQUIRE(empty.model_found);
  CHECK(empty.model->domain() == M.domain());

  const auto contra = run({P("#1 in W0"), P("not #1 in W0")});
  CHECK(contra.refuted);
  CHECK_FALSE(contra.model_found);

  const auto width = run({P("forall x in M . x in W0"), P("exists x in W0 . not x in M")});
  CHECK_FALSE(width.refuted);
  REQUIRE(width.model_found);
  CHECK(is_subset(M.domain(), width.model->predicate("W0")));
  CHECK_FALSE(width.forbidden());

  ConsistencyBudget wide;
  wide.stage = 4;
  const auto cv = consistent(Theory("t", {P("exists x . not x in M")}), Signature{M.domain(), {}}, wide);
  CHECK(cv.kind == ConsistencyVerdict::kModelFound);
  const auto cr = consistent(Theory("t", {P("exists x in M . not x in M")}), Signature{M.domain(), {}});
  CHECK(cr.kind == ConsistencyVerdict::kRefuted);
  CHECK(consistent(Theory("t", {P("exists x . not x in M")}), Signature{M.domain(), {}}).kind ==
        ConsistencyVerdict::kUnknown);
}

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

#include <set>

#include "doctest.h"
#include "hfv/errors.hpp"
#include "hfv/hf_core.hpp"
#include "oracles.hpp"

using namespace hfv;

TEST_CASE("make_set canonicalizes") {
  const SetValue e;
  CHECK(make_set({e, e}) == singleton(e));
  CHECK(make_set({}) == e);
  CHECK(make_set({singleton(e), e}) == make_set({e, singleton(e)}));
  CHECK(to_string(make_set({singleton(e), e, e})) == "{{} {{}}}");
}

TEST_CASE("ordinals") {
  CHECK(ordinal(0) == SetValue());
  CHECK(to_string(ordinal(2)) == "{{} {{}}}");
  for (unsigned n = 0; n <= 6; ++n) {
    CHECK(rank(ordinal(n)) == n);
    CHECK(is_ordinal(ordinal(n)));
    CHECK(is_transitive(ordinal(n)));
    CHECK(ordinal_value(ordinal(n)) == n);
  }
  CHECK_FALSE(is_ordinal(parse_set("{{{}}}")));
  CHECK_FALSE(ordinal_value(parse_set("{{} {{{}}}}")).has_value());
}

TEST_CASE("stages") {
  CHECK(stage(1) == singleton(SetValue()));
  CHECK(stage(4).size() == 16);
  CHECK(is_subset(stage(3), stage(4)));
  CHECK(stage(5).size() == 65536);
  CHECK_THROWS_AS(stage(6), BudgetError);
  CHECK_THROWS_AS(stage(3, 2), BudgetError);
}

TEST_CASE("stage membership matches rank, against the Ackermann oracle") {
  for (unsigned n = 0; n <= 4; ++n) {
    SetValue vn = stage(n);
    for (std::uint32_t k = 0; k < 65536; ++k) {
      SetValue x = oracle::from_ackermann(k);
      REQUIRE(x.rank() == oracle::ackermann_rank(k));
      if (n <= 3 || k < 256) CHECK(vn.contains(x) == (x.rank() < n));
    }
  }
}

TEST_CASE("canonical representation is unique on rank <= 4") {
  auto all = oracle::all_sets_below_rank(5);
  REQUIRE(all.size() == 65536);
  std::set<std::string> texts;
  std::set<SetValue> values(all.begin(), all.end());
  for (const auto& x : all) texts.insert(to_string(x));
  CHECK(texts.size() == all.size());
  CHECK(values.size() == all.size());
  // parse/print roundtrip on V_4 members
  for (const auto& x : oracle::all_sets_below_rank(4))
    CHECK(parse_set(to_string(x)) == x);
}

namespace {

SetValue tc_fixpoint(const SetValue& x) {
  // Iterate y -> y ∪ ⋃y until stable.
  SetValue cur = x;
  for (;;) {
    SetValue next = set_union(cur, big_union(cur));
    if (next == cur) return cur;
    cur = next;
  }
}

}  // namespace

TEST_CASE("transitive closure") {
  const SetValue e;
  CHECK(transitive_closure(parse_set("{{{}}}")) == make_set({e, singleton(e)}));
  auto v4 = oracle::all_sets_below_rank(5);
  for (std::size_t i = 0; i < v4.size(); i += 37) {
    const SetValue& x = v4[i];
    SetValue tc = transitive_closure(x);
    CHECK(tc == tc_fixpoint(x));
    CHECK(is_transitive(tc));
    CHECK(is_subset(x, tc));
    CHECK(transitive_closure(tc) == tc);
  }
  // monotone: x ⊆ y implies TC(x) ⊆ TC(y), spot-checked over V_4 pairs
  auto small = oracle::all_sets_below_rank(4);
  auto big = oracle::all_sets_below_rank(5);
  for (std::size_t i = 0; i < big.size(); i += 511)
    for (std::size_t j = 0; j < big.size(); j += 1021)
      if (is_subset(big[i], big[j]))
        CHECK(is_subset(transitive_closure(big[i]), transitive_closure(big[j])));
  CHECK(rank(parse_set("{{{}}}")) == 2);
  (void)small;
}

TEST_CASE("pairs and boolean operations") {
  SetValue a = ordinal(2), b = ordinal(3);
  auto p = unpair(kpair(a, b));
  REQUIRE(p);
  CHECK(p->first == a);
  CHECK(p->second == b);
  auto q = unpair(kpair(b, b));
  REQUIRE(q);
  CHECK(q->first == b);
  CHECK_FALSE(unpair(ordinal(3)).has_value());
  CHECK(difference(b, a) == singleton(a));
  CHECK(intersection(b, a) == a);
  CHECK(big_union(b) == a);
  CHECK(successor(a) == b);
}

TEST_CASE("parser") {
  CHECK(parse_set("{ {}, {{}} }") == ordinal(2));
  CHECK(parse_set("#3") == ordinal(3));
  CHECK(parse_set("{{} {}}") == ordinal(1));
  CHECK_THROWS_AS(parse_set("{"), ParseError);
  CHECK_THROWS_AS(parse_set("{} x"), ParseError);
  CHECK_THROWS_AS(parse_set("x"), ParseError);
}

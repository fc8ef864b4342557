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

// Hereditarily finite sets.
//
// A SetValue is an immutable, canonically ordered, duplicate-free collection
// of SetValues. Equal sets have identical representations, so structural
// comparison is set equality and `operator<=>` is the canonical total order
// used everywhere a deterministic choice is needed.

#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hfv {

class SetValue {
 public:
  /// The empty set.
  SetValue() = default;

  /// Builds the set whose members are `elems`; order and duplicates are
  /// irrelevant.
  static SetValue of(std::vector<SetValue> elems);

  std::span<const SetValue> elements() const noexcept;
  std::size_t size() const noexcept { return node_ ? node_->elems.size() : 0; }
  bool empty() const noexcept { return !node_; }
  bool contains(const SetValue& x) const;
  unsigned rank() const noexcept { return node_ ? node_->rank : 0; }
  std::size_t hash() const noexcept { return node_ ? node_->hash : 0x9e3779b9u; }

  friend bool operator==(const SetValue& a, const SetValue& b) noexcept;
  friend std::strong_ordering operator<=>(const SetValue& a,
                                          const SetValue& b) noexcept;

 private:
  struct Node {
    std::vector<SetValue> elems;
    unsigned rank;
    std::size_t hash;
  };
  explicit SetValue(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static SetValue from_sorted_unique(std::vector<SetValue> elems);

  std::shared_ptr<const Node> node_;

  friend SetValue set_union(const SetValue&, const SetValue&);
  friend SetValue difference(const SetValue&, const SetValue&);
  friend SetValue intersection(const SetValue&, const SetValue&);
};

struct SetValueHash {
  std::size_t operator()(const SetValue& s) const noexcept { return s.hash(); }
};

/// Default rank budget for stage(): |V_5| = 65536.
inline constexpr unsigned kDefaultStageBudget = 5;

SetValue make_set(std::vector<SetValue> elems);
SetValue empty_set();
SetValue singleton(const SetValue& x);
SetValue unordered_pair(const SetValue& x, const SetValue& y);
/// Kuratowski pair {{x},{x,y}}.
SetValue kpair(const SetValue& x, const SetValue& y);
/// Inverse of kpair; nullopt when `p` is not a Kuratowski pair.
std::optional<std::pair<SetValue, SetValue>> unpair(const SetValue& p);

/// von Neumann natural n.
SetValue ordinal(unsigned n);
/// n when `x` is the von Neumann natural n.
std::optional<unsigned> ordinal_value(const SetValue& x);
/// Cumulative stage V_n. Throws BudgetError when n > budget.
SetValue stage(unsigned n, unsigned budget = kDefaultStageBudget);
/// All subsets of x; throws BudgetError when |x| > max_size.
SetValue powerset(const SetValue& x, std::size_t max_size = 20);

unsigned rank(const SetValue& x);
/// TC(x): the least transitive set including x (x itself is not a member
/// unless x ∈ TC(x), which well-foundedness forbids).
SetValue transitive_closure(const SetValue& x);
bool is_transitive(const SetValue& x);
bool is_ordinal(const SetValue& x);
bool is_subset(const SetValue& x, const SetValue& y);

SetValue set_union(const SetValue& x, const SetValue& y);
SetValue difference(const SetValue& x, const SetValue& y);
SetValue intersection(const SetValue& x, const SetValue& y);
/// ⋃x
SetValue big_union(const SetValue& x);
SetValue successor(const SetValue& x);
SetValue filter(const SetValue& x, const std::function<bool(const SetValue&)>& keep);

/// Brace notation: `{}` is ∅, members separated by whitespace and/or commas,
/// e.g. `{{} {{}}}`. `#n` abbreviates the natural n. Duplicate members are
/// canonicalized away silently.
SetValue parse_set(std::string_view text);
/// Parses one set starting at `pos`, advancing it past the set.
SetValue parse_set_at(std::string_view text, std::size_t& pos);
std::string to_string(const SetValue& x);

}  // namespace hfv

template <>
struct std::hash<hfv::SetValue> {
  std::size_t operator()(const hfv::SetValue& s) const noexcept { return s.hash(); }
};

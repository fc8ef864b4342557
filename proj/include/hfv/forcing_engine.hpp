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

// Forcing over finite posets: names, generic filters, extensions and the
// forcing relation, both as truth in all generic extensions and by the
// recursive clauses over the order.
//
// Every generic filter of a finite poset is the upward closure of an atom,
// and every such filter already lies in any model holding the poset. The
// desk extension therefore keeps only what is new to M: the value of the
// canonical generic name, a subset of the label set. Closing under the base
// theory (see multiverse_lab) gives the least model containing M and G.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hfv/hf_core.hpp"
#include "hfv/logic_syntax.hpp"
#include "hfv/structure.hpp"

namespace hfv {

/// Finite partial order with a top element. Conditions are indices
/// 0..size()-1, each labelled by a distinct set.
class Poset {
 public:
  /// `order` lists pairs (p, q) meaning p ≤ q; the reflexive-transitive
  /// closure is taken. Throws ValidationError when the closure is not
  /// antisymmetric, labels repeat, or no top exists.
  Poset(std::vector<SetValue> labels,
        const std::vector<std::pair<std::size_t, std::size_t>>& order);

  /// Top above k pairwise incompatible atoms; labels are the ordinals 0..k.
  static Poset fan(std::size_t k);
  /// Chain 0 > 1 > ... > n-1 (0 is the top).
  static Poset chain(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  const SetValue& label(std::size_t p) const { return labels_.at(p); }
  const std::vector<SetValue>& labels() const noexcept { return labels_; }
  SetValue label_set() const { return SetValue::of(labels_); }
  bool leq(std::size_t p, std::size_t q) const { return leq_[p * size() + q]; }
  bool compatible(std::size_t p, std::size_t q) const;
  std::size_t top() const noexcept { return top_; }
  /// Conditions below p (p included).
  const std::vector<std::size_t>& below(std::size_t p) const { return below_[p]; }

 private:
  std::vector<SetValue> labels_;
  std::vector<bool> leq_;
  std::vector<std::vector<std::size_t>> below_;
  std::size_t top_ = 0;
};

/// Every poset with a top and at most `max_conditions` conditions, one per
/// isomorphism class. Labels are the ordinals 0..n-1, top labelled 0.
std::vector<Poset> posets_with_top(std::size_t max_conditions);

using Filter = std::vector<bool>;   // membership per condition
using DenseSet = std::vector<bool>;

std::vector<std::size_t> atoms(const Poset& P);
/// Upward closure of each atom, in atom order.
std::vector<Filter> generic_filters(const Poset& P);
Filter upward_closure(const Poset& P, std::size_t p);
bool is_filter(const Poset& P, const Filter& F);
bool is_dense(const Poset& P, const DenseSet& D);
/// The atom generating a generic filter, if it is one.
std::optional<std::size_t> generic_atom(const Poset& P, const Filter& G);

struct CccReport {
  bool ccc = true;  // every antichain of a finite poset is countable
  std::size_t max_antichain = 0;
  std::vector<std::size_t> witness;
};
CccReport is_ccc(const Poset& P);

/// P-name: finite set of (name, condition) pairs. Names are interned, so
/// equal names share storage and compare by identity.
class PName {
 public:
  PName();  // the empty name
  static PName of(std::vector<std::pair<PName, std::size_t>> constituents);

  const std::vector<std::pair<PName, std::size_t>>& constituents() const;
  /// 0 for the empty name, else one more than the largest constituent rank.
  unsigned rank() const;
  std::size_t hash() const;
  const void* id() const noexcept { return node_.get(); }
  friend bool operator==(const PName& a, const PName& b) noexcept { return a.node_ == b.node_; }
  friend bool operator<(const PName& a, const PName& b) noexcept;

 private:
  struct Node;
  explicit PName(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// x̌ = { (y̌, 1) : y ∈ x }.
PName check_name(const SetValue& x, const Poset& P);
/// Ġ = { (p̌, p) : p ∈ P } with p̌ the check name of p's label.
PName generic_name(const Poset& P);
/// The set the name would denote if every condition held.
SetValue hull(const PName& n);
SetValue eval_name(const PName& n, const Filter& G);

/// A finite family of names closed under constituents.
struct Namespace {
  std::vector<PName> names;
  /// Adds n and, recursively, its constituents.
  void add(const PName& n);
  bool contains(const PName& n) const;
};

/// Ordinal height: the least natural not in the set.
unsigned ordinal_height(const SetValue& s);

/// Check names of M's elements and, when its rank is at most cap, Ġ.
Namespace standard_namespace(const FiniteStructure& M, const Poset& P, unsigned cap,
                             std::size_t max_names = 20000);

/// P ∈ M at desk scale: labels and label set in M, and the label set does
/// not include every natural of M (so no subset of it is a new ordinal).
bool poset_in(const Poset& P, const FiniteStructure& M);

/// M[G]: the evaluations of the standard names, i.e. M plus eval(Ġ, G) when
/// rank(Ġ) ≤ cap. Throws ValidationError unless P ∈ M and G is generic,
/// BudgetError for cap > 16 or past `max_elements`.
FiniteStructure extension(const FiniteStructure& M, const Poset& P, const Filter& G,
                          unsigned cap, std::size_t max_elements = 1u << 16);

using NameEnv = std::map<std::string, PName, std::less<>>;

struct ForcingQuery {
  const FiniteStructure& M;
  const Poset& P;
  Namespace ns;   // range of unbounded quantifiers; closed on use
  NameEnv env;    // names for the free variables of φ
};

/// Free variables are read from `q.env`, constants x̄ as x̌ and the
/// predicate M as M̌. Only Δ0 and Σ1 formulas are supported (else
/// ClassificationError).
bool forces_syntactic(std::size_t p, const Formula& phi, const ForcingQuery& q);
/// For every generic G ∋ p, the structure of evaluations of the namespace
/// (with M interpreted as M's domain) satisfies φ.
bool forces_semantic(std::size_t p, const Formula& phi, const ForcingQuery& q);

struct MaEntry {
  Formula phi;
  bool antecedent = false;              // some p ⊩ ∃x φ
  std::optional<std::size_t> condition;
  bool consequent = false;              // some y ∈ M with φ(y)
  std::optional<SetValue> witness;
  bool holds() const { return !antecedent || consequent; }
};

struct MaReport {
  std::vector<MaEntry> entries;
  CccReport ccc;
  bool holds() const;
};

/// For each φ(x) in the pool: (∃p p ⊩ ∃x φ) → (∃y ∈ M φ(y)).
MaReport absolute_ma_check(const FiniteStructure& M, const Poset& P,
                           const std::vector<Formula>& pool, unsigned cap,
                           const std::string& var = "x");

/// Poset file: one condition label per line (set notation) or an order
/// pair `a <= b`. `;` starts a comment.
Poset parse_poset(std::string_view text);
std::string write_poset(const Poset& P);

}  // namespace hfv

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

// Coding pairs ⟨M₀,R⟩ as rooted trees, their quotients, and the operations
// on quotient trees that mirror pairing, union and separation.
//
// A coding pair for x is the unfolded membership tree of TC({x}): the root
// stands for x and the subtrees below a node stand for the members of the
// set that node stands for. Isomorphic subtrees code the same set, so the
// quotient collapses every isomorphism class to one node; the result is an
// extensional, well-founded DAG.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hfv/hf_core.hpp"
#include "hfv/logic_syntax.hpp"
#include "hfv/structure.hpp"

namespace hfv {

/// Arbitrary finite rooted directed graph: `children[v]` lists the nodes
/// directly below v (the R-predecessors of v). Nothing is validated.
struct RawTree {
  std::vector<std::vector<std::size_t>> children;
  std::size_t root = 0;
  std::vector<std::string> labels;  // optional; empty or one per node

  std::size_t size() const { return children.size(); }
  std::size_t add_node(std::string label = {});
  void add_edge(std::size_t parent, std::size_t child);
};

enum class CodingClause { kNone = 0, kUniqueDistance = 1, kSiblingsDistinct = 2,
                          kLevelsDisjoint = 3, kWellFounded = 4 };

struct CodingPairReport {
  bool ok = true;
  CodingClause clause = CodingClause::kNone;
  std::vector<std::size_t> witnesses;
  std::string message;
};

/// Checks the four coding-pair conditions: (i) unique finite distance from
/// the top, (ii) non-isomorphic sibling subtrees, (iii) distinct nodes at the
/// same distance share no children, (iv) well-foundedness. Well-foundedness
/// is tested first since the others presuppose it; the first violated
/// clause is reported with witnessing nodes.
CodingPairReport validate_coding_pair(const RawTree& t);

/// A RawTree known to satisfy the coding-pair conditions.
class CodingTree {
 public:
  /// Throws ValidationError naming the violated clause.
  static CodingTree from_raw(RawTree t);
  const RawTree& raw() const noexcept { return tree_; }
  std::size_t size() const noexcept { return tree_.size(); }

 private:
  explicit CodingTree(RawTree t) : tree_(std::move(t)) {}
  RawTree tree_;
};

/// Canonical quotient: nodes are isomorphism classes, listed children first
/// in a fixed structural order (height, then child count, then the children
/// lexicographically). Two quotient trees are isomorphic iff they are equal.
class QuotientTree {
 public:
  std::size_t size() const noexcept { return children_.size(); }
  std::size_t root() const noexcept { return root_; }
  const std::vector<std::size_t>& children(std::size_t v) const { return children_[v]; }
  /// For quotients of a coding tree: the input node chosen to represent each
  /// class (the least node index in the class). Empty otherwise.
  const std::vector<std::size_t>& representatives() const noexcept { return reps_; }
  /// The subtree below node v as a quotient tree of its own.
  QuotientTree subtree(std::size_t v) const;
  RawTree to_raw() const;

  /// Structural equality (representatives are ignored).
  friend bool operator==(const QuotientTree& a, const QuotientTree& b) {
    return a.root_ == b.root_ && a.children_ == b.children_;
  }

 private:
  friend class QuotientBuilder;
  friend QuotientTree quotient(const CodingTree&);
  std::vector<std::vector<std::size_t>> children_;
  std::size_t root_ = 0;
  std::vector<std::size_t> reps_;
};

CodingTree encode_set(const SetValue& x);
QuotientTree quotient(const CodingTree& t);
/// Re-canonicalizes a quotient tree; quotient(q) == q.
QuotientTree quotient(const QuotientTree& q);
SetValue decode(const QuotientTree& q);
/// Quotient tree of x built directly from its membership graph.
QuotientTree quotient_of_set(const SetValue& x);

/// { ⟨z,1⟩ : z ∈ X } ∪ { ⟨z,2⟩ : z ∈ Y }.
SetValue rep_pair(const SetValue& x, const SetValue& y);

/// q2 is isomorphic to a direct subtree of q1.
bool et_related(const QuotientTree& q1, const QuotientTree& q2);
/// q1 and q2 are isomorphic.
bool tt_equal(const QuotientTree& q1, const QuotientTree& q2);

QuotientTree pairing_plus(const QuotientTree& q1, const QuotientTree& q2);
QuotientTree union_plus(const QuotientTree& q);
/// Keeps the direct subtrees whose decoding y satisfies φ(y) in `ctx`. φ must
/// have exactly one free variable (else ArityError).
QuotientTree separation_plus(const QuotientTree& q, const Formula& phi,
                             const FiniteStructure& ctx);
/// Every node directly below a direct subtree's top is itself the top of a
/// direct subtree of that subtree, and that subtree is again an extensional
/// quotient.
bool transitivity_check(const QuotientTree& q);

/// Quotient invariants: acyclic, every node reachable, no node with two
/// isomorphic children, no two distinct isomorphic nodes.
bool is_extensional_quotient(const QuotientTree& q);

// -- outline text format ------------------------------------------------------
//
// One node per line; indentation (two spaces per level) gives the parent.
// `- label` introduces a node (label optional); `= label` adds an edge to an
// already introduced node with that label, which is how shared nodes and
// back-edges are written.

RawTree parse_outline(std::string_view text);
std::string write_outline(const RawTree& t);

}  // namespace hfv

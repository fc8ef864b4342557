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

// Formulas of the set-theoretic language extended by a constant for every
// set, the base predicate `M` and extra predicates `W0`, `W1`, ....
//
// Predicate application P(t) is written as membership `t in P`; predicate
// symbols may also bound quantifiers (`forall x in M . φ`).

#pragma once

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hfv/hf_core.hpp"
#include "hfv/structure.hpp"

namespace hfv {

enum class TermKind { kVar, kConst, kPred };

struct Term {
  TermKind kind = TermKind::kConst;
  std::string name;  // variable or predicate symbol
  SetValue value;    // set constant

  static Term var(std::string n) { return {TermKind::kVar, std::move(n), {}}; }
  static Term constant(SetValue v) { return {TermKind::kConst, {}, std::move(v)}; }
  static Term pred(std::string n) { return {TermKind::kPred, std::move(n), {}}; }

  bool is_var() const noexcept { return kind == TermKind::kVar; }
  bool is_const() const noexcept { return kind == TermKind::kConst; }
  bool is_pred() const noexcept { return kind == TermKind::kPred; }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
};

enum class Op {
  kIn,
  kEq,
  kNot,
  kAnd,
  kOr,
  kImplies,
  kForall,
  kExists,
  kForallIn,
  kExistsIn,
};

class Formula {
 public:
  static Formula in(Term a, Term b);
  static Formula eq(Term a, Term b);
  static Formula negation(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula forall_in(std::string var, Term bound, Formula body);
  static Formula exists_in(std::string var, Term bound, Formula body);

  Op op() const { return node_->op; }
  /// Atomic operands; `lhs()` is also the bound of a bounded quantifier.
  const Term& lhs() const { return node_->a; }
  const Term& rhs() const { return node_->b; }
  const Term& bound() const { return node_->a; }
  const std::string& var() const { return node_->var; }
  /// Operand of ¬, left of a binary connective, body of a quantifier.
  const Formula& left() const { return *node_->l; }
  const Formula& right() const { return *node_->r; }
  const Formula& body() const { return *node_->l; }

  bool is_atomic() const { return op() == Op::kIn || op() == Op::kEq; }
  bool is_quantifier() const { return op() >= Op::kForall; }
  bool is_bounded_quantifier() const {
    return op() == Op::kForallIn || op() == Op::kExistsIn;
  }
  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node {
    Op op;
    Term a, b;
    std::string var;
    std::shared_ptr<const Formula> l, r;
    std::size_t size;
    std::size_t hash;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Op op, Term a, Term b, std::string var, const Formula* l,
                      const Formula* r);
  std::shared_ptr<const Node> node_;
};

using Assignment = std::map<std::string, SetValue, std::less<>>;

/// The fixed contradiction (∅̄ ∈ ∅̄) ∧ ¬(∅̄ ∈ ∅̄).
Formula falsum();

std::set<std::string> free_vars(const Formula& f);
bool is_sentence(const Formula& f);
/// Replaces free occurrences of `var` by `t`. `t` must not be a variable that
/// a quantifier of `f` would capture.
Formula substitute(const Formula& f, std::string_view var, const Term& t);
/// Set constants occurring in `f`, in canonical order.
std::vector<SetValue> constants(const Formula& f);
/// Predicate symbols occurring in `f`.
std::set<std::string> predicates(const Formula& f);
/// Immediate and nested subformulas, `f` included.
std::vector<Formula> subformulas(const Formula& f);

// -- text syntax ------------------------------------------------------------

Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);
std::string to_string(const Term& t);

// -- complexity ---------------------------------------------------------------

struct ComplexityClass {
  enum Kind { kDelta0, kSigma, kPi } kind = kDelta0;
  unsigned level = 0;

  bool is_delta0() const { return kind == kDelta0; }
  friend bool operator==(const ComplexityClass&, const ComplexityClass&) = default;
};
std::string to_string(const ComplexityClass& c);

ComplexityClass classify(const Formula& f);

// -- Gödel coding -------------------------------------------------------------

/// What the coding needs to know about the language: the base domain (whose
/// set codes `M`) and the ordered extra predicate names.
struct Signature {
  SetValue base;
  std::vector<std::string> extras;

  bool has(std::string_view pred) const;
};

/// Code of a predicate symbol: `M` is coded by the base domain, the k-th
/// extra symbol by the k-th entry of the singleton chain {D}, {{D}}, ...,
/// skipping chain entries that coincide with a tagged symbol code.
SetValue predicate_code(const Signature& sig, std::string_view pred);

/// Codes `f` as a finite sequence {⟨i, s_i⟩} of symbol codes in prefix order.
/// Constants are ⟨x,3⟩, connectives and quantifiers ⟨k,4⟩, variables
/// ⟨name,5⟩. Throws MalformedFormula when a free variable is outside `scope`
/// or a predicate is missing from `sig`.
SetValue encode_formula(const Formula& f, const Signature& sig,
                        const std::set<std::string>& scope = {});
/// Inverse of encode_formula. Throws DecodeError naming the first malformed
/// component.
Formula decode_formula(const SetValue& code, const Signature& sig);

/// Finite sequence {⟨i, s_i⟩}.
SetValue encode_sequence(const std::vector<SetValue>& items);
std::vector<SetValue> decode_sequence(const SetValue& code);

// -- satisfaction -------------------------------------------------------------

/// Tarskian truth of `f` in `m` under `asg`. Unbounded quantifiers range over
/// the domain. Throws MalformedFormula for an unassigned free variable and
/// InterpretationError for a constant outside the domain or an uninterpreted
/// predicate.
bool satisfies(const FiniteStructure& m, const Formula& f, const Assignment& asg = {});

}  // namespace hfv

template <>
struct std::hash<hfv::Formula> {
  std::size_t operator()(const hfv::Formula& f) const noexcept { return f.hash(); }
};

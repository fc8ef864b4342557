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

// Proof codes in V-logic over a finite base: axiom leaves, modus ponens, the
// Set-rule and the M-rule (the V-rule with the base domain as its range).
//
// The first-order axioms form a fixed Hilbert system whose only finitary
// rule is modus ponens. An A.iii leaf is accepted when, after stripping a
// prefix of unbounded universal quantifiers, its formula is an instance of
// one of the schemas below:
//
//   taut       propositional tautology (quantified and atomic subformulas
//              are treated as propositional letters)
//   inst       ∀xφ → φ[t/x]
//   dist       ∀x(φ → ψ) → (∀xφ → ∀xψ)
//   vac        φ → ∀xφ, x not free in φ
//   eq-refl    x = x for a variable x (c = c for constants is a diagram fact)
//   eq-subst   s = u → (α → α') for atomic α, α' replacing some s by u
//   bq-def     ∀x∈t φ ↔ ∀x(x ∈ t → φ),  ∃x∈t φ ↔ ∃x(x ∈ t ∧ φ)
//   ex-def     ∃xφ ↔ ¬∀x¬φ
//   binst      ∀x∈t φ → (c ∈ t → φ[c/x])
//   ex-intro   φ[c/x] → ∃xφ,  c ∈ t → (φ[c/x] → ∃x∈t φ)
//   dual       ¬∃x∈t φ ↔ ∀x∈t ¬φ,  ¬∀x∈t φ ↔ ∃x∈t ¬φ (and unbounded)
//
// Constants name elements of the base domain; every formula in a proof must
// use only such constants and predicates of the signature.

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hfv/hf_core.hpp"
#include "hfv/logic_syntax.hpp"
#include "hfv/structure.hpp"

namespace hfv {

enum class JustTag { kMembership, kDiagram, kFol, kPremise, kMp, kSet, kM };

struct Justification {
  JustTag tag = JustTag::kPremise;
  std::optional<SetValue> set;  // the range a of rule-set

  static Justification membership() { return {JustTag::kMembership, {}}; }
  static Justification diagram() { return {JustTag::kDiagram, {}}; }
  static Justification fol() { return {JustTag::kFol, {}}; }
  static Justification premise() { return {JustTag::kPremise, {}}; }
  static Justification mp() { return {JustTag::kMp, {}}; }
  static Justification set_rule(SetValue a) { return {JustTag::kSet, std::move(a)}; }
  static Justification m_rule() { return {JustTag::kM, {}}; }
  friend bool operator==(const Justification&, const Justification&) = default;
};

/// `axiom-membership`, `rule-set`, ... as used in proof files.
std::string to_string(JustTag tag);

/// Immutable proof tree; subtrees are shared, copying is cheap.
class ProofTree {
 public:
  ProofTree(Formula conclusion, Justification just, std::vector<ProofTree> children = {});

  const Formula& conclusion() const { return node_->conclusion; }
  const Justification& justification() const { return node_->just; }
  const std::vector<ProofTree>& children() const { return node_->children; }
  /// Leaves have height 1.
  unsigned height() const { return node_->height; }
  std::size_t node_count() const;

  /// Copy with the node at `path` replaced by `replacement`.
  ProofTree replace_at(const std::vector<std::size_t>& path, ProofTree replacement) const;
  const ProofTree& at(const std::vector<std::size_t>& path) const;

 private:
  struct Node {
    Formula conclusion;
    Justification just;
    std::vector<ProofTree> children;
    unsigned height;
  };
  std::shared_ptr<const Node> node_;
};

class Theory {
 public:
  /// Throws MalformedFormula when a sentence has free variables.
  Theory(std::string name, std::vector<Formula> sentences);
  const std::string& name() const noexcept { return name_; }
  const std::vector<Formula>& sentences() const noexcept { return sentences_; }
  bool contains(const Formula& f) const;

 private:
  std::string name_;
  std::vector<Formula> sentences_;
};

struct ProofVerdict {
  bool accepted = true;
  std::vector<std::size_t> path;  // child indices from the root to the failing node
  std::string diagnostic;
};

/// The base structure of a signature: domain `sig.base`, `M` its domain.
FiniteStructure base_structure(const Signature& sig);

/// Name of the first schema `f` instantiates (after the generalization
/// prefix), or empty.
std::string fol_schema(const Formula& f);

/// Checks every node against its justification and reports the first
/// failing node in preorder.
ProofVerdict check_proof(const ProofTree& p, const Theory& th, const Signature& sig);

struct SearchConfig {
  unsigned depth_cap = 16;
  std::size_t fact_cap = 20000;
};

/// Forward search for a proof of falsum() of height at most `depth`. The
/// search saturates by rounds under the derivation steps it knows (premises,
/// instantiation, decided Δ0 facts about the base, modus ponens and
/// propositional contradiction), so a miss means "none found", not "none
/// exists". Throws BudgetError when depth exceeds `cfg.depth_cap`.
std::optional<ProofTree> refutation_search(const Theory& th, const Signature& sig,
                                           unsigned depth, const SearchConfig& cfg = {});

/// Proof of σ when σ is a true sentence about the base alone with every
/// quantifier bounded by a constant or by M; nullopt otherwise.
std::optional<ProofTree> prove_base_fact(const Formula& sigma, const Signature& sig);

// -- consistency ------------------------------------------------------------------

struct ConsistencyBudget {
  unsigned depth = 6;
  unsigned stage = 3;         // outer models are searched inside V_stage
  std::size_t max_models = 2000;
  SearchConfig search;
};

struct ConsistencyVerdict {
  enum Kind { kRefuted, kModelFound, kUnknown } kind = kUnknown;
  std::optional<ProofTree> proof;
  std::optional<FiniteStructure> witness;
};

std::string to_string(ConsistencyVerdict::Kind k);

/// Refutation search and a search for a transitive model of the theory
/// end-extending the base (extra predicates ranging over outer models of the
/// base) inside the budget, run together; the first result wins.
ConsistencyVerdict consistent(const Theory& th, const Signature& sig,
                              const ConsistencyBudget& budget = {});

// -- files ------------------------------------------------------------------------
//
// Proof outline: one node per line, `<tag> :: <formula>`, children indented
// two spaces below their parent. `rule-set` carries its range:
// `rule-set {#0 #1} :: forall x in {#0 #1} . φ`.
//
// Theory file: `name: ...`, `base: <set>`, `predicates: W0 W1` headers, then
// one sentence per line. `;` starts a comment line.

ProofTree parse_proof(std::string_view text);
std::string write_proof(const ProofTree& p);

struct TheoryFile {
  Theory theory;
  Signature sig;
};
TheoryFile parse_theory(std::string_view text);

}  // namespace hfv

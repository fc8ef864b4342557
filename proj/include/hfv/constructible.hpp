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

// Finite initial segments of the constructible hierarchy over a base
// structure, KP instance checks, and the level at which a proof code
// appears.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hfv/hf_core.hpp"
#include "hfv/logic_syntax.hpp"
#include "hfv/structure.hpp"
#include "hfv/vlogic_proofs.hpp"

namespace hfv {

struct LLevel {
  unsigned index = 0;
  SetValue domain;  // the level as a set
  FiniteStructure base;
};

struct LConfig {
  unsigned level_cap = 4;
  std::size_t element_cap = 20000;
  /// Bound on formula evaluations spent building one level.
  std::size_t work_cap = 4'000'000;
  /// Formulas with free variables among x (the defined element) and the
  /// parameters p, q. Empty means default_definability_pool().
  std::vector<Formula> pool;
  /// Take every subset of L_n (full definability with parameters) instead
  /// of the pool; only feasible while 2^|L_n| stays under the element cap.
  bool full_definability = false;
};

/// Quantifier depth ≤ 2 formulas φ(x, p, q): equality, membership in and
/// equality with parameters, pairs, unions, differences, successor, ⋃p,
/// subsets of p, M, transitivity, non-emptiness.
const std::vector<Formula>& default_definability_pool();

/// L_0 = TC({D}); L_{n+1} = { {x ∈ L_n : L_n ⊨ φ(x, p̄)} : φ in the pool,
/// p̄ from L_n }. Pool definability under-approximates full definability;
/// every element returned does lie in the true level. Throws BudgetError
/// when n exceeds the level cap or a level outgrows the element or work cap.
LLevel l_level(const FiniteStructure& base, unsigned n, const LConfig& cfg = {});

/// Least n with x ∈ L_n(base) for the full hierarchy. At finite levels every
/// subset of L_n is definable with parameters, so L_{n+1} = P(L_n) and the
/// level is 0 on L_0 and 1 + max over the members otherwise.
unsigned exact_level(const SetValue& x, const FiniteStructure& base);

struct KPInstance {
  enum Kind { kSeparation, kCollection } kind = kSeparation;
  Formula phi;    // φ(x) for Separation, φ(x, y) for Collection
  SetValue a;
  std::string x = "x";
  std::string y = "y";
};

/// Separation: {x ∈ a : φ(x)} is an element of the level. Collection: if
/// every x ∈ a has a witness y in the level, some b in the level holds
/// witnesses for all of them. Throws ClassificationError for non-Δ0 φ and
/// ValidationError when a is not in the level.
bool check_kp_instance(const LLevel& level, const KPInstance& inst);

/// ⟨code(φ), ⟨tag, ⟨codes of the children⟩⟩⟩, where the tag is the numeral
/// 0..6 in the order membership, diagram, fol, premise, mp, set, m, and a
/// Set-rule tag is ⟨5, a⟩.
SetValue encode_proof(const ProofTree& p, const Signature& sig);
ProofTree decode_proof(const SetValue& code, const Signature& sig);

/// exact_level of the proof code over the signature's base structure.
/// Throws BudgetError when the level exceeds `cap`.
unsigned proof_rank(const ProofTree& p, const Signature& sig, unsigned cap = 256);

}  // namespace hfv

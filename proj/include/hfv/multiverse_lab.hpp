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

// Outer and inner models of finite transitive structures, the IMH schema,
// global covering and set-theoretic geology, all relative to the desk base
// theory T_fin: closure under union, difference, pairing below the ordinal
// height, and separation by the parameter-free formulas "z is an ordinal"
// and "z is transitive".

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hfv/forcing_engine.hpp"
#include "hfv/hf_core.hpp"
#include "hfv/logic_syntax.hpp"
#include "hfv/structure.hpp"
#include "hfv/vlogic_proofs.hpp"

namespace hfv {

/// Smallest transitive set containing `seed`'s elements and closed under
/// T_fin. Throws BudgetError past `max_elements`.
SetValue tfin_closure(const SetValue& seed, std::size_t max_elements = 1u << 14);
/// A failing closure instance, e.g. "union of {..} missing"; nullopt when
/// `d` is transitive and T_fin-closed.
std::optional<std::string> tfin_violation(const SetValue& d);

class UniverseModel {
 public:
  /// Throws ValidationError naming the failing instance unless `domain` is
  /// transitive and T_fin-closed.
  explicit UniverseModel(SetValue domain);
  static UniverseModel closure_of(const SetValue& seed);

  const SetValue& domain() const noexcept { return structure_.domain(); }
  const FiniteStructure& structure() const noexcept { return structure_; }
  unsigned height() const { return ordinal_height(domain()); }
  friend bool operator==(const UniverseModel& a, const UniverseModel& b) {
    return a.domain() == b.domain();
  }

 private:
  FiniteStructure structure_;
};

/// Checks inner ⊆ outer, equal ordinal heights and end extension; throws
/// ValidationError otherwise.
struct ModelPair {
  UniverseModel inner;
  UniverseModel outer;
  ModelPair(UniverseModel inner, UniverseModel outer);
};

/// Every UniverseModel W ⊆ V_budget with M ⊆ W and M's ordinals, M first,
/// then in canonical order. Throws BudgetError for budget > 4 or past
/// `max_models`.
std::vector<UniverseModel> outer_models(const UniverseModel& M, unsigned budget_stage,
                                        std::size_t max_models = 100000);
/// Every UniverseModel W ⊆ M with M's ordinals, in canonical order (M last).
std::vector<UniverseModel> inner_models(const UniverseModel& M);
/// T_fin closure of M's naturals.
UniverseModel ordinal_core(const UniverseModel& M);

/// T_fin closure of extension(W, P, G, cap). Throws ValidationError when
/// the closure gains an ordinal.
UniverseModel forcing_extension(const UniverseModel& W, const Poset& P, const Filter& G,
                                unsigned cap);

enum class OuterRange { kAllOuter, kForcingOnly };

struct ImhEntry {
  Formula phi;
  bool antecedent = false;  // true in an inner model of an outer model
  std::optional<SetValue> outer, outer_inner;
  bool consequent = false;  // true in an inner model of M
  std::optional<SetValue> inner;
  bool holds() const { return !antecedent || consequent; }
};

struct ImhReport {
  std::vector<ImhEntry> entries;
  std::size_t outer_count = 0;
  bool holds() const;
};

/// kForcingOnly admits only M and its forcing extensions by posets in M with
/// at most `cap` conditions into the antecedent.
ImhReport imh_check(const UniverseModel& M, const std::vector<Formula>& pool, unsigned budget,
                    OuterRange range = OuterRange::kAllOuter, unsigned cap = 3);

/// The sets x ⊆ d lying in `m` (d itself included) form a Boolean algebra;
/// its atoms partition d.
std::vector<SetValue> atoms_of(const SetValue& d, const SetValue& m);

struct CoverFailure {
  SetValue d;
  SetValue w_atom;
  std::size_t v_atoms = 0;  // V-atoms inside w_atom, ≥ κ
};

/// Functions in a model are those whose fibres over their domain lie in it.
/// W covers V for κ iff every d ∈ W splits so that each W-atom of d holds
/// fewer than κ V-atoms; the first failure otherwise.
std::optional<CoverFailure> covering_failure(const UniverseModel& W, const UniverseModel& V,
                                             std::size_t kappa);
bool global_covers(const UniverseModel& W, const UniverseModel& V, std::size_t kappa);
/// The same test restricted to functions with domain d.
bool covers_on(const UniverseModel& W, const UniverseModel& V, const SetValue& d,
               std::size_t kappa);

struct Ground {
  UniverseModel W;
  Poset P;
  Filter G;
  bool trivial() const { return P.size() == 1; }
};

/// M with the trivial poset first, then every inner W ⊊ M with a poset of at
/// most `cap` conditions in W and a generic G such that W[G] = M (one
/// witness per W).
std::vector<Ground> grounds(const UniverseModel& M, unsigned cap);
UniverseModel mantle(const UniverseModel& M, unsigned cap);
bool ground_axiom(const UniverseModel& M, unsigned cap);

struct BarwiseBudget {
  unsigned depth = 6;
  unsigned stage = 4;
  std::size_t max_models = 20000;
  SearchConfig search;
};

struct BarwiseReport {
  bool refuted = false;
  std::optional<ProofTree> proof;
  bool model_found = false;
  std::optional<FiniteStructure> model;  // with M and the extra predicate interpreted
  bool forbidden() const { return refuted && model_found; }
};

/// Runs the refutation search and, independently, the search for an outer
/// model W of M and a predicate value (an outer model of M inside W) making
/// the theory true. The signature's base must be M's domain and it may have
/// at most one extra predicate.
BarwiseReport barwise_correspondence(const Theory& th, const Signature& sig,
                                     const UniverseModel& M, const BarwiseBudget& budget = {});

/// The model half alone; nullopt when nothing in budget satisfies `th`.
std::optional<FiniteStructure> find_outer_model(const Theory& th, const Signature& sig,
                                                const UniverseModel& M, unsigned stage,
                                                std::size_t max_models);

}  // namespace hfv

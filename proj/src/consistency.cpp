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

#include "hfv/errors.hpp"
#include "hfv/multiverse_lab.hpp"
#include "hfv/vlogic_proofs.hpp"

namespace hfv {

ConsistencyVerdict consistent(const Theory& th, const Signature& sig,
                              const ConsistencyBudget& budget) {
  ConsistencyVerdict v;
  if (auto p = refutation_search(th, sig, budget.depth, budget.search)) {
    v.kind = ConsistencyVerdict::kRefuted;
    v.proof = std::move(p);
    return v;
  }
  // The model half needs the base to be a T_fin model inside the stage.
  if (sig.extras.size() > 1 || tfin_violation(sig.base) || sig.base.rank() > budget.stage)
    return v;
  if (auto m = find_outer_model(th, sig, UniverseModel(sig.base), budget.stage, budget.max_models)) {
    v.kind = ConsistencyVerdict::kModelFound;
    v.witness = std::move(m);
  }
  return v;
}

}  // namespace hfv

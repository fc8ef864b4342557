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

// Seeded sample fleets shared by the command-line suites and the tests.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hfv/forcing_engine.hpp"
#include "hfv/multiverse_lab.hpp"

namespace hfv {

/// Every rank-1 name, every {(m, p)} over them, `extra` seeded two-pair
/// names, 2̌ and Ġ.
Namespace rank2_names(const Poset& P, unsigned seed = 7, std::size_t extra = 12);

/// Δ0 and Σ1 formulas over the free variables a, b, g.
const std::vector<std::string>& forcing_formula_texts();

struct ForcingPair {
  UniverseModel W;
  Poset P;
  Filter G;
  UniverseModel E;  // W[G], a proper extension of W
};

/// Seeded ground/extension pairs. W is the closure of two random subsets of
/// V_4; P is a chain through some S ∉ W inside a label set L ∈ W, with the
/// rest of L placed below random chain elements, and G is generated by the
/// bottom of the chain.
std::vector<ForcingPair> forcing_pairs(unsigned seed, std::size_t count,
                                       std::size_t max_size = 1u << 12);

}  // namespace hfv

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

#include "hfv/structure.hpp"

#include <algorithm>

#include "hfv/errors.hpp"

namespace hfv {

FiniteStructure::FiniteStructure(SetValue domain) : domain_(std::move(domain)) {
  if (!is_transitive(domain_))
    throw ValidationError("structure domain is not transitive: " + to_string(domain_));
}

FiniteStructure FiniteStructure::with_predicate(std::string name, SetValue extent) const {
  FiniteStructure out = *this;
  auto it = std::find_if(out.predicates_.begin(), out.predicates_.end(),
                         [&](const auto& p) { return p.first == name; });
  if (it != out.predicates_.end())
    it->second = std::move(extent);
  else
    out.predicates_.emplace_back(std::move(name), std::move(extent));
  return out;
}

FiniteStructure FiniteStructure::with_well_order(std::vector<SetValue> order) const {
  std::vector<SetValue> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  auto dom = domain_.elements();
  if (sorted.size() != dom.size() || !std::equal(sorted.begin(), sorted.end(), dom.begin()))
    throw ValidationError("well-order is not a permutation of the domain");
  FiniteStructure out = *this;
  out.well_order_ = std::move(order);
  return out;
}

const SetValue& FiniteStructure::predicate(std::string_view name) const {
  for (const auto& [n, ext] : predicates_)
    if (n == name) return ext;
  if (name == "M") return domain_;
  throw InterpretationError("predicate " + std::string(name) + " is not interpreted");
}

bool FiniteStructure::has_predicate(std::string_view name) const {
  if (name == "M") return true;
  return std::any_of(predicates_.begin(), predicates_.end(),
                     [&](const auto& p) { return p.first == name; });
}

}  // namespace hfv

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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hfv/hf_core.hpp"

namespace hfv {

/// A transitive finite model: the quantifier domain plus interpretations of
/// the predicate symbols `M`, `W0`, `W1`, .... When `M` has no explicit
/// interpretation it denotes the domain itself.
class FiniteStructure {
 public:
  FiniteStructure() = default;
  /// Throws ValidationError when `domain` is not transitive.
  explicit FiniteStructure(SetValue domain);

  const SetValue& domain() const noexcept { return domain_; }

  /// Returns a copy with predicate `name` interpreted as `extent`.
  FiniteStructure with_predicate(std::string name, SetValue extent) const;
  /// Returns a copy carrying a well-order of the domain (a permutation of
  /// its elements). Throws ValidationError when it is not one.
  FiniteStructure with_well_order(std::vector<SetValue> order) const;

  /// Interpretation of a predicate symbol; throws InterpretationError when
  /// the symbol is not interpreted.
  const SetValue& predicate(std::string_view name) const;
  bool has_predicate(std::string_view name) const;
  const std::vector<std::pair<std::string, SetValue>>& predicates() const noexcept {
    return predicates_;
  }
  const std::optional<std::vector<SetValue>>& well_order() const noexcept {
    return well_order_;
  }

 private:
  SetValue domain_;
  std::optional<std::vector<SetValue>> well_order_;
  std::vector<std::pair<std::string, SetValue>> predicates_;
};

}  // namespace hfv

// Model fleets shared by the multiverse tests and the acceptance run.
#pragma once

#include <random>
#include <set>
#include <vector>

#include "hfv/errors.hpp"
#include "hfv/fleets.hpp"
#include "hfv/multiverse_lab.hpp"

namespace fleet {

// Every T_fin model inside V_4, found by testing each transitive subset
// directly rather than by closure.
inline const std::vector<hfv::SetValue>& models_in_v4() {
  static const std::vector<hfv::SetValue> all = [] {
    using hfv::SetValue;
    const auto V4 = hfv::stage(4);
    const auto e = V4.elements();
    std::vector<SetValue> out;
    for (std::uint32_t s = 0; s < (1u << e.size()); ++s) {
      std::vector<SetValue> pick;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (s >> i & 1u) pick.push_back(e[i]);
      const auto d = hfv::SetValue::of(std::move(pick));
      if (hfv::is_transitive(d) && !hfv::tfin_violation(d)) out.push_back(d);
    }
    return out;
  }();
  return all;
}

using hfv::ForcingPair;
using hfv::forcing_pairs;

}  // namespace fleet

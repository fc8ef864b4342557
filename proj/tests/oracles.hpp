// Test-only oracles, written independently of the library's algorithms.
#pragma once

#include <cstdint>
#include <vector>

#include "hfv/hf_core.hpp"

namespace oracle {

// Ackermann coding: member j of set k iff bit j of k is set. Codes below
// 2^16 are exactly V_5, codes below 16 exactly V_4.
inline hfv::SetValue from_ackermann(std::uint32_t k) {
  std::vector<hfv::SetValue> elems;
  for (std::uint32_t j = 0; j < 32; ++j)
    if (k >> j & 1u) elems.push_back(from_ackermann(j));
  return hfv::SetValue::of(std::move(elems));
}

inline unsigned ackermann_rank(std::uint32_t k) {
  unsigned r = 0;
  for (std::uint32_t j = 0; j < 32; ++j)
    if (k >> j & 1u) {
      unsigned rj = ackermann_rank(j) + 1;
      if (rj > r) r = rj;
    }
  return r;
}

inline std::vector<hfv::SetValue> all_sets_below_rank(unsigned n) {
  // rank < n, n <= 5
  std::uint32_t bound = n == 0 ? 0 : 1;
  for (unsigned i = 1; i < n; ++i) bound = 1u << bound;
  std::vector<hfv::SetValue> out;
  for (std::uint32_t k = 0; k < bound; ++k) out.push_back(from_ackermann(k));
  return out;
}

}  // namespace oracle

// Fleet shared by the forcing tests and the acceptance run: names of rank
// at most 2 over a poset and a fixed formula pool.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "hfv/fleets.hpp"

namespace fleet {

// All rank-1 names, every single-constituent rank-2 name, a seeded sample
// of two-constituent rank-2 names, the check name of 2 and the generic name.
using hfv::rank2_names;

inline const std::vector<std::string>& formula_texts() { return hfv::forcing_formula_texts(); }

}  // namespace fleet

// Seeded generators for property-style tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "hfv/logic_syntax.hpp"

namespace gen {

struct FormulaGen {
  std::mt19937& rng;
  std::vector<hfv::SetValue> constants;
  std::vector<std::string> preds{"M"};
  bool bounded_only = false;

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  hfv::Term term(const std::vector<std::string>& vars, bool allow_pred) {
    std::size_t choices = vars.size() + (constants.empty() ? 0 : 1) + (allow_pred ? 1 : 0);
    std::size_t c = pick(choices);
    if (c < vars.size()) return hfv::Term::var(vars[c]);
    c -= vars.size();
    if (!constants.empty() && c == 0) return hfv::Term::constant(constants[pick(constants.size())]);
    return hfv::Term::pred(preds[pick(preds.size())]);
  }

  hfv::Formula atom(const std::vector<std::string>& vars) {
    if (vars.empty() && constants.empty()) {
      return hfv::Formula::in(hfv::Term::constant({}), hfv::Term::constant({}));
    }
    if (pick(3) == 0) return hfv::Formula::eq(term(vars, false), term(vars, false));
    return hfv::Formula::in(term(vars, false), term(vars, true));
  }

  hfv::Formula formula(std::vector<std::string> vars, int depth) {
    if (depth <= 0 || pick(4) == 0) return atom(vars);
    switch (pick(6)) {
      case 0:
        return hfv::Formula::negation(formula(vars, depth - 1));
      case 1:
        return hfv::Formula::conj(formula(vars, depth - 1), formula(vars, depth - 1));
      case 2:
        return hfv::Formula::disj(formula(vars, depth - 1), formula(vars, depth - 1));
      case 3:
        return hfv::Formula::implies(formula(vars, depth - 1), formula(vars, depth - 1));
      default: {
        std::string v = "v" + std::to_string(vars.size());
        auto inner = vars;
        inner.push_back(v);
        bool bounded = bounded_only || pick(2) == 0;
        bool all = pick(2) == 0;
        hfv::Formula body = formula(inner, depth - 1);
        if (bounded) {
          hfv::Term b = term(vars, true);
          return all ? hfv::Formula::forall_in(v, b, body) : hfv::Formula::exists_in(v, b, body);
        }
        return all ? hfv::Formula::forall(v, body) : hfv::Formula::exists(v, body);
      }
    }
  }
};

}  // namespace gen

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

#include "hfv/vlogic_proofs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "hfv/errors.hpp"

namespace hfv {

std::string to_string(JustTag tag) {
  switch (tag) {
    case JustTag::kMembership: return "axiom-membership";
    case JustTag::kDiagram: return "axiom-diagram";
    case JustTag::kFol: return "axiom-fol";
    case JustTag::kPremise: return "premise";
    case JustTag::kMp: return "rule-mp";
    case JustTag::kSet: return "rule-set";
    case JustTag::kM: return "rule-m";
  }
  return "?";
}

ProofTree::ProofTree(Formula conclusion, Justification just, std::vector<ProofTree> children) {
  unsigned h = 0;
  for (const auto& c : children) h = std::max(h, c.height());
  node_ = std::make_shared<const Node>(
      Node{std::move(conclusion), std::move(just), std::move(children), h + 1});
}

std::size_t ProofTree::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.node_count();
  return n;
}

const ProofTree& ProofTree::at(const std::vector<std::size_t>& path) const {
  const ProofTree* p = this;
  for (std::size_t i : path) p = &p->children().at(i);
  return *p;
}

ProofTree ProofTree::replace_at(const std::vector<std::size_t>& path,
                                ProofTree replacement) const {
  std::function<ProofTree(const ProofTree&, std::size_t)> go = [&](const ProofTree& p,
                                                                   std::size_t k) {
    if (k == path.size()) return replacement;
    std::vector<ProofTree> kids = p.children();
    kids.at(path[k]) = go(kids.at(path[k]), k + 1);
    return ProofTree(p.conclusion(), p.justification(), std::move(kids));
  };
  return go(*this, 0);
}

Theory::Theory(std::string name, std::vector<Formula> sentences)
    : name_(std::move(name)), sentences_(std::move(sentences)) {
  for (const auto& s : sentences_)
    if (!is_sentence(s))
      throw MalformedFormula("theory member has free variables: " + to_string(s));
}

bool Theory::contains(const Formula& f) const {
  return std::find(sentences_.begin(), sentences_.end(), f) != sentences_.end();
}

FiniteStructure base_structure(const Signature& sig) { return FiniteStructure(sig.base); }

std::string to_string(ConsistencyVerdict::Kind k) {
  switch (k) {
    case ConsistencyVerdict::kRefuted: return "refuted";
    case ConsistencyVerdict::kModelFound: return "model-found";
    case ConsistencyVerdict::kUnknown: return "unknown";
  }
  return "?";
}

// -- first-order schemas -----------------------------------------------------------

namespace {

using F = Formula;

F imp(F a, F b) { return F::implies(std::move(a), std::move(b)); }
F neg(F a) { return F::negation(std::move(a)); }

bool is_imp(const F& f) { return f.op() == Op::kImplies; }

// Propositional letters of f: maximal atomic or quantified subformulas.
void collect_primes(const F& f, std::vector<F>& out) {
  switch (f.op()) {
    case Op::kNot: collect_primes(f.left(), out); return;
    case Op::kAnd:
    case Op::kOr:
    case Op::kImplies:
      collect_primes(f.left(), out);
      collect_primes(f.right(), out);
      return;
    default:
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
}

// Three-valued evaluation: 1 true, 0 false, -1 undetermined.
int prop_eval(const F& f, const std::vector<F>& primes, const std::vector<int>& val) {
  switch (f.op()) {
    case Op::kNot: {
      int a = prop_eval(f.left(), primes, val);
      return a < 0 ? -1 : 1 - a;
    }
    case Op::kAnd: {
      int a = prop_eval(f.left(), primes, val), b = prop_eval(f.right(), primes, val);
      if (a == 0 || b == 0) return 0;
      return a == 1 && b == 1 ? 1 : -1;
    }
    case Op::kOr: {
      int a = prop_eval(f.left(), primes, val), b = prop_eval(f.right(), primes, val);
      if (a == 1 || b == 1) return 1;
      return a == 0 && b == 0 ? 0 : -1;
    }
    case Op::kImplies: {
      int a = prop_eval(f.left(), primes, val), b = prop_eval(f.right(), primes, val);
      if (a == 0 || b == 1) return 1;
      return a == 1 && b == 0 ? 0 : -1;
    }
    default: {
      auto it = std::find(primes.begin(), primes.end(), f);
      return val[static_cast<std::size_t>(it - primes.begin())];
    }
  }
}

// Is the conjunction of `fs` propositionally satisfiable?
bool prop_satisfiable(const std::vector<F>& fs, const std::vector<F>& primes,
                      std::vector<int>& val) {
  std::size_t branch = primes.size();
  for (const auto& f : fs) {
    int v = prop_eval(f, primes, val);
    if (v == 0) return false;
    if (v < 0 && branch == primes.size()) {
      std::vector<F> mine;
      collect_primes(f, mine);
      for (const auto& p : mine) {
        std::size_t i = static_cast<std::size_t>(
            std::find(primes.begin(), primes.end(), p) - primes.begin());
        if (val[i] < 0) {
          branch = i;
          break;
        }
      }
    }
  }
  if (branch == primes.size()) return true;
  for (int b : {1, 0}) {
    val[branch] = b;
    if (prop_satisfiable(fs, primes, val)) {
      val[branch] = -1;
      return true;
    }
  }
  val[branch] = -1;
  return false;
}

bool prop_satisfiable(const std::vector<F>& fs) {
  std::vector<F> primes;
  for (const auto& f : fs) collect_primes(f, primes);
  std::vector<int> val(primes.size(), -1);
  return prop_satisfiable(fs, primes, val);
}

bool is_tautology(const F& f) { return !prop_satisfiable({neg(f)}); }

void collect_terms(const F& f, std::vector<Term>& out) {
  auto add = [&](const Term& t) {
    if (!t.is_pred() && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  };
  if (f.is_atomic()) {
    add(f.lhs());
    add(f.rhs());
    return;
  }
  if (f.is_bounded_quantifier()) add(f.bound());
  if (f.op() == Op::kNot || f.is_quantifier()) {
    collect_terms(f.body(), out);
    return;
  }
  collect_terms(f.left(), out);
  collect_terms(f.right(), out);
}

// φ[t/x] == target for some term t occurring in target (or x itself).
bool is_instance(const F& phi, const std::string& x, const F& target) {
  std::vector<Term> cands;
  collect_terms(target, cands);
  cands.push_back(Term::var(x));
  for (const auto& t : cands) {
    try {
      if (substitute(phi, x, t) == target) return true;
    } catch (const MalformedFormula&) {
    }
  }
  return false;
}

std::optional<Term> instance_term(const F& phi, const std::string& x, const F& target) {
  std::vector<Term> cands;
  collect_terms(target, cands);
  cands.push_back(Term::var(x));
  for (const auto& t : cands) {
    try {
      if (substitute(phi, x, t) == target) return t;
    } catch (const MalformedFormula&) {
    }
  }
  return std::nullopt;
}

bool bound_ok(const F& q) { return !(q.bound().is_var() && q.bound().name == q.var()); }

bool schema_inst(const F& m) {
  return is_imp(m) && m.left().op() == Op::kForall &&
         is_instance(m.left().body(), m.left().var(), m.right());
}

bool schema_dist(const F& m) {
  if (!is_imp(m) || !is_imp(m.right())) return false;
  const F &a = m.left(), &b = m.right().left(), &c = m.right().right();
  if (a.op() != Op::kForall || b.op() != Op::kForall || c.op() != Op::kForall) return false;
  if (a.var() != b.var() || a.var() != c.var() || !is_imp(a.body())) return false;
  return a.body().left() == b.body() && a.body().right() == c.body();
}

bool schema_vac(const F& m) {
  return is_imp(m) && m.right().op() == Op::kForall && m.right().body() == m.left() &&
         !free_vars(m.left()).contains(m.right().var());
}

bool schema_eq_refl(const F& m) {
  return m.op() == Op::kEq && m.lhs().is_var() && m.lhs() == m.rhs();
}

bool schema_eq_subst(const F& m) {
  if (!is_imp(m) || m.left().op() != Op::kEq || !is_imp(m.right())) return false;
  const Term &s = m.left().lhs(), &u = m.left().rhs();
  const F &a = m.right().left(), &b = m.right().right();
  if (!a.is_atomic() || a.op() != b.op()) return false;
  auto pos = [&](const Term& x, const Term& y) { return x == y || (x == s && y == u); };
  return pos(a.lhs(), b.lhs()) && pos(a.rhs(), b.rhs());
}

bool bq_pair(const F& bq, const F& unb) {
  // ∀x∈t φ  vs  ∀x(x∈t → φ);  ∃x∈t φ  vs  ∃x(x∈t ∧ φ)
  if (!bq.is_bounded_quantifier() || !bound_ok(bq)) return false;
  bool all = bq.op() == Op::kForallIn;
  if (unb.op() != (all ? Op::kForall : Op::kExists) || unb.var() != bq.var()) return false;
  const F& body = unb.body();
  if (body.op() != (all ? Op::kImplies : Op::kAnd)) return false;
  return body.left() == F::in(Term::var(bq.var()), bq.bound()) && body.right() == bq.body();
}

bool schema_bq_def(const F& m) {
  return is_imp(m) && (bq_pair(m.left(), m.right()) || bq_pair(m.right(), m.left()));
}

bool ex_pair(const F& ex, const F& nall) {
  return ex.op() == Op::kExists && nall.op() == Op::kNot && nall.left().op() == Op::kForall &&
         nall.left().var() == ex.var() && nall.left().body() == neg(ex.body());
}

bool schema_ex_def(const F& m) {
  return is_imp(m) && (ex_pair(m.left(), m.right()) || ex_pair(m.right(), m.left()));
}

bool schema_binst(const F& m) {
  if (!is_imp(m) || m.left().op() != Op::kForallIn || !bound_ok(m.left())) return false;
  if (!is_imp(m.right()) || m.right().left().op() != Op::kIn) return false;
  const F& q = m.left();
  const Term& c = m.right().left().lhs();
  if (m.right().left().rhs() != q.bound() || c.is_pred()) return false;
  try {
    return substitute(q.body(), q.var(), c) == m.right().right();
  } catch (const MalformedFormula&) {
    return false;
  }
}

bool schema_ex_intro(const F& m) {
  if (!is_imp(m)) return false;
  if (m.right().op() == Op::kExists)
    return is_instance(m.right().body(), m.right().var(), m.left());
  // c ∈ t → (φ[c] → ∃x∈t φ)
  if (m.left().op() != Op::kIn || !is_imp(m.right())) return false;
  const F& q = m.right().right();
  if (q.op() != Op::kExistsIn || !bound_ok(q) || m.left().rhs() != q.bound()) return false;
  const Term& c = m.left().lhs();
  if (c.is_pred()) return false;
  try {
    return substitute(q.body(), q.var(), c) == m.right().left();
  } catch (const MalformedFormula&) {
    return false;
  }
}

// ¬Q x φ  vs  Q' x ¬φ with the same bound.
bool dual_pair(const F& nq, const F& q2) {
  if (nq.op() != Op::kNot || !nq.left().is_quantifier()) return false;
  const F& q = nq.left();
  Op want = q.op() == Op::kForall     ? Op::kExists
            : q.op() == Op::kExists   ? Op::kForall
            : q.op() == Op::kForallIn ? Op::kExistsIn
                                      : Op::kForallIn;
  if (q2.op() != want || q2.var() != q.var()) return false;
  if (q.is_bounded_quantifier() && (q.bound() != q2.bound() || !bound_ok(q))) return false;
  return q2.body() == neg(q.body());
}

bool schema_dual(const F& m) {
  return is_imp(m) && (dual_pair(m.left(), m.right()) || dual_pair(m.right(), m.left()));
}

struct Schema {
  const char* name;
  bool (*match)(const F&);
};

bool schema_taut(const F& m) {
  std::vector<F> primes;
  collect_primes(m, primes);
  return primes.size() <= 20 && is_tautology(m);
}

constexpr Schema kSchemas[] = {
    {"taut", schema_taut},         {"inst", schema_inst},     {"dist", schema_dist},
    {"vac", schema_vac},           {"eq-refl", schema_eq_refl}, {"eq-subst", schema_eq_subst},
    {"bq-def", schema_bq_def},     {"ex-def", schema_ex_def}, {"binst", schema_binst},
    {"ex-intro", schema_ex_intro}, {"dual", schema_dual},
};

}  // namespace

std::string fol_schema(const Formula& f) {
  const Formula* m = &f;
  while (true) {
    for (const auto& s : kSchemas)
      if (s.match(*m)) return s.name;
    if (m->op() != Op::kForall) return {};
    m = &m->body();
  }
}

// -- checking --------------------------------------------------------------------

namespace {

std::optional<std::string> ill_formed(const F& f, const Signature& sig) {
  for (const auto& c : constants(f))
    if (!sig.base.contains(c)) return "constant " + to_string(c) + " is not in the base";
  for (const auto& p : predicates(f))
    if (!sig.has(p)) return "predicate " + p + " is not in the signature";
  return std::nullopt;
}

bool is_base_atom(const F& f) {
  if (!f.is_atomic()) return false;
  return f.lhs().is_const() && f.rhs().is_const();
}

std::string path_text(const std::vector<std::size_t>& path) {
  std::string s = "root";
  for (std::size_t i : path) s += "." + std::to_string(i);
  return s;
}

struct Checker {
  const Theory& th;
  const Signature& sig;
  FiniteStructure base;
  std::vector<std::size_t> path;
  ProofVerdict out;

  bool fail(std::string why) {
    out.accepted = false;
    out.path = path;
    out.diagnostic = "node " + path_text(path) + ": " + why;
    return false;
  }

  // Checks the premises of a Set- or M-rule node. `exactly_once` forbids
  // duplicate premises.
  bool cover(const ProofTree& p, const SetValue& range, bool exactly_once) {
    const F& c = p.conclusion();
    if (!free_vars(c.body()).contains(c.var())) {
      // Every instance is the body itself; only the count identifies premises.
      for (std::size_t i = 0; i < p.children().size(); ++i)
        if (p.children()[i].conclusion() != c.body())
          return fail("premise " + std::to_string(i) + " is not the rule's body");
      std::size_t n = p.children().size();
      if (n < range.size())
        return fail("missing premises: " + std::to_string(n) + " of " +
                    std::to_string(range.size()) + " instances over " + to_string(range));
      if (exactly_once && n > range.size()) return fail("more premises than elements of the range");
      return true;
    }
    std::map<SetValue, int> seen;
    for (std::size_t i = 0; i < p.children().size(); ++i) {
      const F& got = p.children()[i].conclusion();
      auto t = instance_term(c.body(), c.var(), got);
      if (!t || !t->is_const() || !range.contains(t->value))
        return fail("premise " + std::to_string(i) + " (" + to_string(got) +
                    ") is not an instance of the rule's body over " + to_string(range));
      if (++seen[t->value] > 1 && exactly_once)
        return fail("premise for b = " + to_string(t->value) + " appears twice");
    }
    for (const auto& b : range.elements())
      if (!seen.contains(b))
        return fail("missing premise for b = " + to_string(b) + ": " +
                    to_string(substitute(c.body(), c.var(), Term::constant(b))));
    return true;
  }

  bool node(const ProofTree& p) {
    const F& f = p.conclusion();
    if (auto why = ill_formed(f, sig)) return fail(*why);
    const auto& kids = p.children();
    JustTag tag = p.justification().tag;
    bool leaf = tag == JustTag::kMembership || tag == JustTag::kDiagram ||
                tag == JustTag::kFol || tag == JustTag::kPremise;
    if (leaf && !kids.empty()) return fail(to_string(tag) + " takes no premises");
    switch (tag) {
      case JustTag::kMembership:
        if (f.op() != Op::kIn || !f.lhs().is_const() || !f.rhs().is_pred() ||
            f.rhs().name != "M")
          return fail("axiom-membership must conclude x ∈ M for a constant x");
        break;
      case JustTag::kDiagram: {
        bool negated = f.op() == Op::kNot;
        const F& a = negated ? f.left() : f;
        if (!is_base_atom(a))
          return fail("axiom-diagram needs an atomic or negated atomic sentence about the base");
        if (satisfies(base, a) == negated) return fail("diagram sentence is false in the base");
        break;
      }
      case JustTag::kFol:
        if (fol_schema(f).empty()) return fail("not an instance of a first-order axiom schema");
        break;
      case JustTag::kPremise:
        if (!th.contains(f)) return fail("not a sentence of theory " + th.name());
        break;
      case JustTag::kMp:
        if (kids.size() != 2) return fail("rule-mp takes exactly two premises");
        if (kids[1].conclusion() != imp(kids[0].conclusion(), f))
          return fail("rule-mp premises do not have the form φ, φ → " + to_string(f));
        break;
      case JustTag::kSet: {
        const auto& a = p.justification().set;
        if (!a) return fail("rule-set without a range");
        if (!sig.base.contains(*a)) return fail("rule-set range is not in the base");
        if (f.op() != Op::kForallIn || f.bound() != Term::constant(*a))
          return fail("rule-set must conclude ∀x ∈ " + to_string(*a) + " φ");
        if (!cover(p, *a, true)) return false;
        break;
      }
      case JustTag::kM:
        if (f.op() != Op::kForallIn || f.bound() != Term::pred("M"))
          return fail("rule-m must conclude ∀x ∈ M φ");
        if (!cover(p, sig.base, false)) return false;
        break;
    }
    for (std::size_t i = 0; i < kids.size(); ++i) {
      path.push_back(i);
      if (!node(kids[i])) return false;
      path.pop_back();
    }
    return true;
  }
};

}  // namespace

ProofVerdict check_proof(const ProofTree& p, const Theory& th, const Signature& sig) {
  Checker c{th, sig, base_structure(sig), {}, {}};
  c.node(p);
  if (c.out.accepted) c.out.diagnostic = "accepted";
  return c.out;
}

// -- proofs of base facts ---------------------------------------------------------

namespace {

ProofTree axiom(F f) { return ProofTree(std::move(f), Justification::fol()); }

// From proofs of φ and φ → ψ.
ProofTree mp(ProofTree a, ProofTree ab) {
  F concl = ab.conclusion().right();
  return ProofTree(std::move(concl), Justification::mp(), {std::move(a), std::move(ab)});
}

// Chains φ1 → (φ2 → ... → χ) through proofs of φ1, φ2, ....
ProofTree mp_chain(ProofTree impl, const std::vector<ProofTree>& premises) {
  for (const auto& p : premises) impl = mp(p, impl);
  return impl;
}

F taut_chain(const std::vector<F>& premises, F goal) {
  for (auto it = premises.rbegin(); it != premises.rend(); ++it) goal = imp(*it, goal);
  return goal;
}

// Derives `goal` from proved premises by one tautology and modus ponens.
ProofTree by_taut(const std::vector<ProofTree>& premises, F goal) {
  std::vector<F> fs;
  for (const auto& p : premises) fs.push_back(p.conclusion());
  return mp_chain(axiom(taut_chain(fs, std::move(goal))), premises);
}

F inst(const F& q, const SetValue& b) {
  return substitute(q.body(), q.var(), Term::constant(b));
}

bool decidable(const F& f, const Signature& sig) {
  if (ill_formed(f, sig)) return false;
  for (const auto& s : subformulas(f)) {
    if (s.op() == Op::kForall || s.op() == Op::kExists) return false;
    if (s.is_bounded_quantifier() && !s.bound().is_const() &&
        !(s.bound().is_pred() && s.bound().name == "M"))
      return false;
  }
  for (const auto& p : predicates(f))
    if (p != "M") return false;
  return is_sentence(f);
}

struct BaseProver {
  const Signature& sig;
  FiniteStructure base;

  bool truth(const F& f) const { return satisfies(base, f); }

  const SetValue& range(const Term& bound) const {
    return bound.is_const() ? bound.value : sig.base;
  }

  ProofTree member(const SetValue& b, const Term& bound) const {
    if (bound.is_pred()) return ProofTree(F::in(Term::constant(b), bound), Justification::membership());
    return ProofTree(F::in(Term::constant(b), bound), Justification::diagram());
  }

  ProofTree gather(const F& q, std::vector<ProofTree> kids) const {
    if (q.bound().is_const()) return ProofTree(q, Justification::set_rule(q.bound().value), std::move(kids));
    return ProofTree(q, Justification::m_rule(), std::move(kids));
  }

  // Proof of f, which must be true.
  ProofTree prove(const F& f) const {
    switch (f.op()) {
      case Op::kIn:
      case Op::kEq:
        if (f.rhs().is_pred()) return ProofTree(f, Justification::membership());
        return ProofTree(f, Justification::diagram());
      case Op::kNot:
        return refute(f.left());
      case Op::kAnd:
        return by_taut({prove(f.left()), prove(f.right())}, f);
      case Op::kOr:
        return by_taut({prove(truth(f.left()) ? f.left() : f.right())}, f);
      case Op::kImplies:
        if (!truth(f.left())) return by_taut({refute(f.left())}, f);
        return by_taut({prove(f.right())}, f);
      case Op::kForallIn: {
        std::vector<ProofTree> kids;
        for (const auto& b : range(f.bound()).elements()) kids.push_back(prove(inst(f, b)));
        return gather(f, std::move(kids));
      }
      case Op::kExistsIn:
        for (const auto& b : range(f.bound()).elements()) {
          F fb = inst(f, b);
          if (!truth(fb)) continue;
          F ax = imp(F::in(Term::constant(b), f.bound()), imp(fb, f));
          return mp_chain(axiom(ax), {member(b, f.bound()), prove(fb)});
        }
        break;
      default:
        break;
    }
    throw InterpretationError("no base proof for " + to_string(f));
  }

  // Proof of ¬f, f false.
  ProofTree refute(const F& f) const {
    F nf = neg(f);
    switch (f.op()) {
      case Op::kIn:
      case Op::kEq:
        return ProofTree(nf, Justification::diagram());
      case Op::kNot:
        return by_taut({prove(f.left())}, nf);
      case Op::kAnd:
        return by_taut({refute(truth(f.left()) ? f.right() : f.left())}, nf);
      case Op::kOr:
        return by_taut({refute(f.left()), refute(f.right())}, nf);
      case Op::kImplies:
        return by_taut({prove(f.left()), refute(f.right())}, nf);
      case Op::kForallIn:
        for (const auto& b : range(f.bound()).elements()) {
          F fb = inst(f, b);
          if (truth(fb)) continue;
          F ex = F::exists_in(f.var(), f.bound(), neg(f.body()));
          F ax = imp(F::in(Term::constant(b), f.bound()), imp(neg(fb), ex));
          ProofTree wit = mp_chain(axiom(ax), {member(b, f.bound()), refute(fb)});
          return mp(wit, axiom(imp(ex, nf)));
        }
        break;
      case Op::kExistsIn: {
        F all = F::forall_in(f.var(), f.bound(), neg(f.body()));
        std::vector<ProofTree> kids;
        for (const auto& b : range(f.bound()).elements()) kids.push_back(refute(inst(f, b)));
        return mp(gather(all, std::move(kids)), axiom(imp(all, nf)));
      }
      default:
        break;
    }
    throw InterpretationError("no base refutation for " + to_string(f));
  }
};

}  // namespace

std::optional<ProofTree> prove_base_fact(const Formula& sigma, const Signature& sig) {
  if (!decidable(sigma, sig)) return std::nullopt;
  BaseProver bp{sig, base_structure(sig)};
  if (!bp.truth(sigma)) return std::nullopt;
  return bp.prove(sigma);
}

// -- refutation search ------------------------------------------------------------

namespace {

class Saturator {
 public:
  Saturator(const Theory& th, const Signature& sig, unsigned depth, std::size_t cap)
      : sig_(sig), prover_{sig, base_structure(sig)}, depth_(depth), cap_(cap) {
    for (const auto& s : th.sentences())
      if (!ill_formed(s, sig)) add(ProofTree(s, Justification::premise()));
  }

  std::optional<ProofTree> run() {
    for (unsigned round = 0; round < depth_ && !found_; ++round) {
      std::size_t before = order_.size();
      std::size_t n = order_.size();
      for (std::size_t i = 0; i < n && !found_ && !full(); ++i) step(order_[i]);
      decide_primes();
      gather();
      contradiction();
      if (order_.size() == before || full()) break;
    }
    if (!found_) contradiction();
    return found_;
  }

 private:
  bool full() const { return order_.size() >= cap_; }

  const ProofTree* find(const F& f) const {
    auto it = facts_.find(f);
    return it == facts_.end() ? nullptr : &it->second;
  }

  void add(ProofTree p) {
    if (p.height() > depth_ || found_) return;
    const F& f = p.conclusion();
    if (f == falsum()) {
      found_ = p;
      return;
    }
    if (facts_.contains(f) || full()) return;
    order_.push_back(f);
    facts_.emplace(f, std::move(p));
  }

  void step(F f) {
    ProofTree p = facts_.at(f);
    switch (f.op()) {
      case Op::kAnd:
        add(by_taut({p}, f.left()));
        add(by_taut({p}, f.right()));
        break;
      case Op::kOr:
        for (int side = 0; side < 2; ++side) {
          const F& a = side ? f.right() : f.left();
          const F& b = side ? f.left() : f.right();
          if (const ProofTree* na = find(neg(a))) add(by_taut({p, *na}, b));
        }
        break;
      case Op::kImplies:
        if (const ProofTree* a = find(f.left())) add(mp(*a, p));
        else if (auto a2 = prove_base_fact(f.left(), sig_)) add(mp(*a2, p));
        if (const ProofTree* nb = find(neg(f.right()))) add(by_taut({p, *nb}, neg(f.left())));
        break;
      case Op::kForall:
        for (const auto& c : sig_.base.elements()) {
          F fc = inst(f, c);
          add(mp(p, axiom(imp(f, fc))));
        }
        break;
      case Op::kForallIn: {
        const Term& t = f.bound();
        std::vector<std::pair<SetValue, ProofTree>> members;
        if (t.is_const()) {
          for (const auto& b : t.value.elements())
            members.emplace_back(b, prover_.member(b, t));
        } else if (t.is_pred() && t.name == "M") {
          for (const auto& b : sig_.base.elements()) members.emplace_back(b, prover_.member(b, t));
        } else if (t.is_pred()) {
          for (const auto& c : sig_.base.elements())
            if (const ProofTree* m = find(F::in(Term::constant(c), t))) members.emplace_back(c, *m);
        }
        for (auto& [b, mem] : members) {
          F fb = inst(f, b);
          F ax = imp(f, imp(F::in(Term::constant(b), t), fb));
          add(mp(mem, mp(p, axiom(ax))));
        }
        break;
      }
      case Op::kNot: {
        const F& g = f.left();
        switch (g.op()) {
          case Op::kNot: add(by_taut({p}, g.left())); break;
          case Op::kOr:
            add(by_taut({p}, neg(g.left())));
            add(by_taut({p}, neg(g.right())));
            break;
          case Op::kImplies:
            add(by_taut({p}, g.left()));
            add(by_taut({p}, neg(g.right())));
            break;
          case Op::kAnd:
            if (const ProofTree* a = find(g.left())) add(by_taut({p, *a}, neg(g.right())));
            if (const ProofTree* b = find(g.right())) add(by_taut({p, *b}, neg(g.left())));
            break;
          case Op::kForall:
            add(mp(p, axiom(imp(f, F::exists(g.var(), neg(g.body()))))));
            break;
          case Op::kExists:
            add(mp(p, axiom(imp(f, F::forall(g.var(), neg(g.body()))))));
            break;
          case Op::kForallIn:
            add(mp(p, axiom(imp(f, F::exists_in(g.var(), g.bound(), neg(g.body()))))));
            break;
          case Op::kExistsIn:
            add(mp(p, axiom(imp(f, F::forall_in(g.var(), g.bound(), neg(g.body()))))));
            break;
          default:
            break;
        }
        break;
      }
      default:
        break;
    }
  }

  // Settles every base-decidable sentence occurring in a fact.
  void decide_primes() {
    std::size_t n = order_.size();
    for (std::size_t i = 0; i < n && !full(); ++i)
      for (const auto& s : subformulas(F(order_[i]))) {
        if (s.op() == Op::kNot || !decided_.insert(s).second) continue;
        if (!decidable(s, sig_)) continue;
        if (prover_.truth(s)) add(prover_.prove(s));
        else add(prover_.refute(s));
      }
  }

  // Proof of g from the facts by a few propositional steps, or of a
  // base-decidable g.
  std::optional<ProofTree> establish(const F& g, int budget) {
    if (const ProofTree* p = find(g)) return *p;
    if (decidable(g, sig_)) {
      if (!prover_.truth(g)) return std::nullopt;
      return prover_.prove(g);
    }
    if (budget == 0) return std::nullopt;
    auto both = [&](const F& a, const F& b) -> std::optional<ProofTree> {
      auto pa = establish(a, budget - 1);
      if (!pa) return std::nullopt;
      auto pb = establish(b, budget - 1);
      if (!pb) return std::nullopt;
      return by_taut({*pa, *pb}, g);
    };
    auto either = [&](const F& a, const F& b) -> std::optional<ProofTree> {
      for (const F* x : {&a, &b})
        if (auto px = establish(*x, budget - 1)) return by_taut({*px}, g);
      return std::nullopt;
    };
    switch (g.op()) {
      case Op::kAnd: return both(g.left(), g.right());
      case Op::kOr: return either(g.left(), g.right());
      case Op::kImplies: return either(neg(g.left()), g.right());
      case Op::kNot: {
        const F& h = g.left();
        switch (h.op()) {
          case Op::kNot: return either(h.left(), h.left());
          case Op::kAnd: return either(neg(h.left()), neg(h.right()));
          case Op::kOr: return both(neg(h.left()), neg(h.right()));
          case Op::kImplies: return both(h.left(), neg(h.right()));
          default: return std::nullopt;
        }
      }
      default:
        return std::nullopt;
    }
  }

  // Set-rule and M-rule: closes bounded quantifiers over the base whose
  // instances are all established.
  void gather() {
    std::size_t n = order_.size();
    for (std::size_t i = 0; i < n && !full(); ++i)
      for (const auto& q : subformulas(F(order_[i]))) {
        if (!q.is_bounded_quantifier() || !is_sentence(q) || decidable(q, sig_)) continue;
        const Term& t = q.bound();
        if (!(t.is_const() || (t.is_pred() && t.name == "M"))) continue;
        bool all = q.op() == Op::kForallIn;
        F target = all ? q : F::forall_in(q.var(), t, neg(q.body()));
        if (find(target) || !gathered_.insert(target).second) continue;
        std::vector<ProofTree> kids;
        for (const auto& b : prover_.range(t).elements()) {
          auto pb = establish(inst(target, b), 3);
          if (!pb) break;
          kids.push_back(*pb);
        }
        if (kids.size() != prover_.range(t).size()) {
          gathered_.erase(target);
          continue;
        }
        ProofTree closed = prover_.gather(target, std::move(kids));
        if (all) add(closed);
        else add(mp(closed, axiom(imp(target, neg(q)))));
      }
  }

  // Looks for a propositionally inconsistent set of facts and closes it off
  // with one tautology.
  void contradiction() {
    if (found_) return;
    F bot = falsum();
    for (const auto& f : order_)
      if (const ProofTree* nf = find(neg(f))) {
        add(by_taut({facts_.at(f), *nf}, bot));
        if (found_) return;
      }
    std::vector<F> fs = order_;
    std::vector<F> primes;
    for (const auto& f : fs) collect_primes(f, primes);
    if (primes.size() > 24 || prop_satisfiable(fs)) return;
    // Shrink to a minimal inconsistent core.
    for (std::size_t i = fs.size(); i-- > 0;) {
      std::vector<F> rest = fs;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      if (!prop_satisfiable(rest)) fs = std::move(rest);
    }
    std::sort(fs.begin(), fs.end(), [&](const F& a, const F& b) {
      return facts_.at(a).height() > facts_.at(b).height();
    });
    std::vector<ProofTree> premises;
    for (const auto& f : fs) premises.push_back(facts_.at(f));
    add(by_taut(premises, bot));
  }

  const Signature& sig_;
  BaseProver prover_;
  unsigned depth_;
  std::size_t cap_;
  std::vector<F> order_;
  std::unordered_map<F, ProofTree> facts_;
  std::set<F> decided_;
  std::set<F> gathered_;
  std::optional<ProofTree> found_;
};

}  // namespace

std::optional<ProofTree> refutation_search(const Theory& th, const Signature& sig,
                                           unsigned depth, const SearchConfig& cfg) {
  if (depth > cfg.depth_cap)
    throw BudgetError("depth", "refutation depth " + std::to_string(depth) + " exceeds cap " +
                                   std::to_string(cfg.depth_cap));
  if (sig.base.empty()) return std::nullopt;  // no constant names the contradiction
  return Saturator(th, sig, depth, cfg.fact_cap).run();
}

// -- files ------------------------------------------------------------------------

namespace {

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct ProofLine {
  std::size_t depth;
  Justification just;
  Formula f;
  std::size_t lineno;
};

ProofTree build_proof(const std::vector<ProofLine>& lines, std::size_t& i) {
  const ProofLine& me = lines[i++];
  std::vector<ProofTree> kids;
  while (i < lines.size() && lines[i].depth > me.depth) {
    if (lines[i].depth != me.depth + 1) throw ParseError("indentation skips a level", lines[i].lineno);
    kids.push_back(build_proof(lines, i));
  }
  return ProofTree(me.f, me.just, std::move(kids));
}

}  // namespace

ProofTree parse_proof(std::string_view text) {
  std::vector<ProofLine> lines;
  std::size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++lineno;
    std::string body = trim(line);
    if (body.empty() || body[0] == ';') continue;
    std::size_t indent = line.find_first_not_of(' ');
    if (indent % 2) throw ParseError("indentation must be a multiple of two spaces", lineno);
    auto sep = body.find("::");
    if (sep == std::string::npos) throw ParseError("expected '<tag> :: <formula>'", lineno);
    std::string head = trim(body.substr(0, sep));
    std::string tag = head.substr(0, head.find(' '));
    Justification j;
    if (tag == "axiom-membership") j = Justification::membership();
    else if (tag == "axiom-diagram") j = Justification::diagram();
    else if (tag == "axiom-fol") j = Justification::fol();
    else if (tag == "premise") j = Justification::premise();
    else if (tag == "rule-mp") j = Justification::mp();
    else if (tag == "rule-m") j = Justification::m_rule();
    else if (tag == "rule-set") {
      if (head.size() == tag.size()) throw ParseError("rule-set needs its range", lineno);
      try {
        j = Justification::set_rule(parse_set(head.substr(tag.size())));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
    } else {
      throw ParseError("unknown justification '" + tag + "'", lineno);
    }
    if (tag != "rule-set" && head.size() != tag.size())
      throw ParseError("unexpected text after " + tag, lineno);
    Formula f = [&] {
      try {
        return parse_formula(body.substr(sep + 2));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
    }();
    lines.push_back({indent / 2, j, f, lineno});
  }
  if (lines.empty()) throw ParseError("empty proof");
  if (lines[0].depth != 0) throw ParseError("the conclusion must not be indented", lines[0].lineno);
  std::size_t i = 0;
  ProofTree p = build_proof(lines, i);
  if (i != lines.size()) throw ParseError("more than one root", lines[i].lineno);
  return p;
}

std::string write_proof(const ProofTree& p) {
  std::string out;
  std::function<void(const ProofTree&, std::size_t)> go = [&](const ProofTree& q, std::size_t d) {
    out += std::string(2 * d, ' ') + to_string(q.justification().tag);
    if (q.justification().set) out += " " + to_string(*q.justification().set);
    out += " :: " + to_string(q.conclusion()) + "\n";
    for (const auto& c : q.children()) go(c, d + 1);
  };
  go(p, 0);
  return out;
}

TheoryFile parse_theory(std::string_view text) {
  std::string name = "theory";
  std::optional<SetValue> base;
  std::optional<std::vector<std::string>> preds;
  std::vector<Formula> sentences;
  std::size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line = trim(std::string(text.substr(start, end - start)));
    start = end + 1;
    ++lineno;
    if (line.empty() || line[0] == ';') continue;
    try {
      if (line.starts_with("name:")) {
        name = trim(line.substr(5));
      } else if (line.starts_with("base:")) {
        base = parse_set(line.substr(5));
      } else if (line.starts_with("predicates:")) {
        preds.emplace();
        std::string rest = line.substr(11);
        std::size_t p = 0;
        while (p < rest.size()) {
          std::size_t q = rest.find_first_of(" ,", p);
          if (q == std::string::npos) q = rest.size();
          if (q > p) preds->push_back(rest.substr(p, q - p));
          p = q + 1;
        }
      } else {
        sentences.push_back(parse_formula(line));
      }
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (!base) throw ParseError("theory file needs a 'base:' line");
  if (!preds) {
    std::set<std::string> used;
    for (const auto& s : sentences)
      for (const auto& p : predicates(s))
        if (p != "M") used.insert(p);
    preds.emplace(used.begin(), used.end());
  }
  return {Theory(name, std::move(sentences)), Signature{*base, *preds}};
}

}  // namespace hfv

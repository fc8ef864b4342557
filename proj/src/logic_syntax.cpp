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

#include "hfv/logic_syntax.hpp"

#include <algorithm>
#include <cctype>

#include "hfv/errors.hpp"

namespace hfv {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t term_hash(const Term& t) {
  std::size_t h = static_cast<std::size_t>(t.kind) * 31;
  h = mix(h, std::hash<std::string>{}(t.name));
  return mix(h, t.value.hash());
}

}  // namespace

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  return a.value <=> b.value;
}

Formula Formula::make(Op op, Term a, Term b, std::string var, const Formula* l,
                      const Formula* r) {
  std::size_t size = 1;
  std::size_t h = mix(static_cast<std::size_t>(op) + 1, term_hash(a));
  h = mix(h, term_hash(b));
  h = mix(h, std::hash<std::string>{}(var));
  std::shared_ptr<const Formula> lp, rp;
  if (l) {
    size += l->size();
    h = mix(h, l->hash());
    lp = std::make_shared<const Formula>(*l);
  }
  if (r) {
    size += r->size();
    h = mix(h, r->hash() * 3);
    rp = std::make_shared<const Formula>(*r);
  }
  return Formula(std::make_shared<const Node>(
      Node{op, std::move(a), std::move(b), std::move(var), lp, rp, size, h}));
}

Formula Formula::in(Term a, Term b) {
  if (a.is_pred()) throw MalformedFormula("predicate symbol on the left of 'in'");
  return make(Op::kIn, std::move(a), std::move(b), {}, nullptr, nullptr);
}
Formula Formula::eq(Term a, Term b) {
  if (a.is_pred() || b.is_pred()) throw MalformedFormula("predicate symbol in equation");
  return make(Op::kEq, std::move(a), std::move(b), {}, nullptr, nullptr);
}
Formula Formula::negation(Formula f) { return make(Op::kNot, {}, {}, {}, &f, nullptr); }
Formula Formula::conj(Formula l, Formula r) { return make(Op::kAnd, {}, {}, {}, &l, &r); }
Formula Formula::disj(Formula l, Formula r) { return make(Op::kOr, {}, {}, {}, &l, &r); }
Formula Formula::implies(Formula l, Formula r) {
  return make(Op::kImplies, {}, {}, {}, &l, &r);
}
Formula Formula::forall(std::string var, Formula body) {
  return make(Op::kForall, {}, {}, std::move(var), &body, nullptr);
}
Formula Formula::exists(std::string var, Formula body) {
  return make(Op::kExists, {}, {}, std::move(var), &body, nullptr);
}
Formula Formula::forall_in(std::string var, Term bound, Formula body) {
  if (bound.is_var() && bound.name == var)
    throw MalformedFormula("variable " + var + " bounds itself");
  return make(Op::kForallIn, std::move(bound), {}, std::move(var), &body, nullptr);
}
Formula Formula::exists_in(std::string var, Term bound, Formula body) {
  if (bound.is_var() && bound.name == var)
    throw MalformedFormula("variable " + var + " bounds itself");
  return make(Op::kExistsIn, std::move(bound), {}, std::move(var), &body, nullptr);
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  if (auto c = a.node_->a <=> b.node_->a; c != 0) return c;
  if (auto c = a.node_->b <=> b.node_->b; c != 0) return c;
  if (auto c = a.node_->var <=> b.node_->var; c != 0) return c;
  if (a.node_->l) {
    if (auto c = *a.node_->l <=> *b.node_->l; c != 0) return c;
  }
  if (a.node_->r) {
    if (auto c = *a.node_->r <=> *b.node_->r; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Formula falsum() {
  const Term e = Term::constant(SetValue());
  Formula atom = Formula::in(e, e);
  return Formula::conj(atom, Formula::negation(atom));
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  auto term = [&](const Term& t) {
    if (t.is_var() && !bound.count(t.name)) out.insert(t.name);
  };
  switch (f.op()) {
    case Op::kIn:
    case Op::kEq:
      term(f.lhs());
      term(f.rhs());
      return;
    case Op::kNot:
      collect_free(f.left(), bound, out);
      return;
    case Op::kAnd:
    case Op::kOr:
    case Op::kImplies:
      collect_free(f.left(), bound, out);
      collect_free(f.right(), bound, out);
      return;
    case Op::kForallIn:
    case Op::kExistsIn:
      term(f.bound());
      [[fallthrough]];
    case Op::kForall:
    case Op::kExists: {
      bool fresh = bound.insert(f.var()).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
  }
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

Formula substitute(const Formula& f, std::string_view var, const Term& t) {
  auto sub = [&](const Term& x) { return x.is_var() && x.name == var ? t : x; };
  switch (f.op()) {
    case Op::kIn:
      return Formula::in(sub(f.lhs()), sub(f.rhs()));
    case Op::kEq:
      return Formula::eq(sub(f.lhs()), sub(f.rhs()));
    case Op::kNot:
      return Formula::negation(substitute(f.left(), var, t));
    case Op::kAnd:
      return Formula::conj(substitute(f.left(), var, t), substitute(f.right(), var, t));
    case Op::kOr:
      return Formula::disj(substitute(f.left(), var, t), substitute(f.right(), var, t));
    case Op::kImplies:
      return Formula::implies(substitute(f.left(), var, t),
                              substitute(f.right(), var, t));
    case Op::kForall:
    case Op::kExists:
    case Op::kForallIn:
    case Op::kExistsIn: {
      Term b = f.is_bounded_quantifier() ? sub(f.bound()) : Term{};
      Formula body = f.var() == var ? f.body() : substitute(f.body(), var, t);
      if (f.var() != var && t.is_var() && t.name == f.var())
        throw MalformedFormula("substitution of " + t.name + " would be captured");
      switch (f.op()) {
        case Op::kForall:
          return Formula::forall(f.var(), body);
        case Op::kExists:
          return Formula::exists(f.var(), body);
        case Op::kForallIn:
          return Formula::forall_in(f.var(), b, body);
        default:
          return Formula::exists_in(f.var(), b, body);
      }
    }
  }
  return f;
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out{f};
  switch (f.op()) {
    case Op::kIn:
    case Op::kEq:
      break;
    case Op::kNot:
    case Op::kForall:
    case Op::kExists:
    case Op::kForallIn:
    case Op::kExistsIn: {
      auto s = subformulas(f.left());
      out.insert(out.end(), s.begin(), s.end());
      break;
    }
    default: {
      auto s = subformulas(f.left());
      out.insert(out.end(), s.begin(), s.end());
      s = subformulas(f.right());
      out.insert(out.end(), s.begin(), s.end());
    }
  }
  return out;
}

std::vector<SetValue> constants(const Formula& f) {
  std::vector<SetValue> out;
  for (const auto& g : subformulas(f)) {
    if (g.is_atomic() || g.is_bounded_quantifier()) {
      if (g.lhs().is_const()) out.push_back(g.lhs().value);
      if (g.is_atomic() && g.rhs().is_const()) out.push_back(g.rhs().value);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::set<std::string> predicates(const Formula& f) {
  std::set<std::string> out;
  for (const auto& g : subformulas(f)) {
    if (g.is_atomic() || g.is_bounded_quantifier()) {
      if (g.lhs().is_pred()) out.insert(g.lhs().name);
      if (g.is_atomic() && g.rhs().is_pred()) out.insert(g.rhs().name);
    }
  }
  return out;
}

// -- text syntax --------------------------------------------------------------

std::string to_string(const Term& t) {
  switch (t.kind) {
    case TermKind::kVar:
    case TermKind::kPred:
      return t.name;
    case TermKind::kConst:
      return to_string(t.value);
  }
  return {};
}

std::string to_string(const Formula& f) {
  switch (f.op()) {
    case Op::kIn:
      return to_string(f.lhs()) + " in " + to_string(f.rhs());
    case Op::kEq:
      return to_string(f.lhs()) + " = " + to_string(f.rhs());
    case Op::kNot:
      return "not " + (f.left().is_atomic() ? "(" + to_string(f.left()) + ")"
                                            : to_string(f.left()));
    case Op::kAnd:
      return "(" + to_string(f.left()) + " and " + to_string(f.right()) + ")";
    case Op::kOr:
      return "(" + to_string(f.left()) + " or " + to_string(f.right()) + ")";
    case Op::kImplies:
      return "(" + to_string(f.left()) + " implies " + to_string(f.right()) + ")";
    case Op::kForall:
      return "forall " + f.var() + " . " + to_string(f.body());
    case Op::kExists:
      return "exists " + f.var() + " . " + to_string(f.body());
    case Op::kForallIn:
      return "forall " + f.var() + " in " + to_string(f.bound()) + " . " +
             to_string(f.body());
    case Op::kExistsIn:
      return "exists " + f.var() + " in " + to_string(f.bound()) + " . " +
             to_string(f.body());
  }
  return {};
}

namespace {

bool is_pred_name(std::string_view s) {
  if (s == "M") return true;
  if (s.size() < 2 || s[0] != 'W') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_keyword(std::string_view s) {
  return s == "forall" || s == "exists" || s == "not" || s == "and" || s == "or" ||
         s == "implies" || s == "in";
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view t) : text_(t) {}

  Formula parse_all() {
    Formula f = formula();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in formula '" +
                     std::string(text_) + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  std::string peek_word() {
    skip();
    std::size_t p = pos_;
    while (p < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[p])) || text_[p] == '_' ||
            text_[p] == '\''))
      ++p;
    return std::string(text_.substr(pos_, p - pos_));
  }

  std::string word() {
    std::string w = peek_word();
    if (w.empty()) fail("expected identifier");
    pos_ += w.size();
    return w;
  }

  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Term term() {
    skip();
    if (pos_ < text_.size() && (text_[pos_] == '{' || text_[pos_] == '#'))
      return Term::constant(parse_set_at(text_, pos_));
    std::string w = word();
    if (is_keyword(w)) fail("keyword '" + w + "' where a term was expected");
    if (is_pred_name(w)) return Term::pred(w);
    return Term::var(w);
  }

  Formula formula() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    if (text_[pos_] == '(') {
      ++pos_;
      Formula l = formula();
      for (;;) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == ')') {
          ++pos_;
          return l;
        }
        std::string op = word();
        Formula r = formula();
        if (op == "and")
          l = Formula::conj(l, r);
        else if (op == "or")
          l = Formula::disj(l, r);
        else if (op == "implies")
          l = Formula::implies(l, r);
        else
          fail("unknown connective '" + op + "'");
      }
    }
    std::string w = peek_word();
    if (w == "not") {
      pos_ += w.size();
      return Formula::negation(formula());
    }
    if (w == "forall" || w == "exists") {
      pos_ += w.size();
      std::string v = word();
      if (is_keyword(v) || is_pred_name(v)) fail("bad bound variable '" + v + "'");
      std::string next = peek_word();
      if (next == "in") {
        pos_ += 2;
        Term b = term();
        expect('.');
        Formula body = formula();
        return w == "forall" ? Formula::forall_in(v, b, body)
                             : Formula::exists_in(v, b, body);
      }
      expect('.');
      Formula body = formula();
      return w == "forall" ? Formula::forall(v, body) : Formula::exists(v, body);
    }
    Term a = term();
    skip();
    if (pos_ < text_.size() && text_[pos_] == '=') {
      ++pos_;
      return Formula::eq(a, term());
    }
    std::string op = word();
    if (op != "in") fail("expected 'in' or '='");
    return Formula::in(a, term());
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse_all(); }

// -- complexity -----------------------------------------------------------------

std::string to_string(const ComplexityClass& c) {
  switch (c.kind) {
    case ComplexityClass::kDelta0:
      return "Delta0";
    case ComplexityClass::kSigma:
      return "Sigma" + std::to_string(c.level);
    case ComplexityClass::kPi:
      return "Pi" + std::to_string(c.level);
  }
  return {};
}

namespace {

using CC = ComplexityClass;

CC dual(CC c) {
  if (c.kind == CC::kSigma) return {CC::kPi, c.level};
  if (c.kind == CC::kPi) return {CC::kSigma, c.level};
  return c;
}

CC join(CC a, CC b) {
  if (a.is_delta0()) return b;
  if (b.is_delta0()) return a;
  if (a.level != b.level) return a.level > b.level ? a : b;
  if (a.kind == b.kind) return a;
  return {CC::kSigma, a.level + 1};
}

CC quantify(CC body, CC::Kind k) {
  if (body.is_delta0()) return {k, 1};
  if (body.kind == k) return body;
  return {k, body.level + 1};
}

}  // namespace

ComplexityClass classify(const Formula& f) {
  switch (f.op()) {
    case Op::kIn:
    case Op::kEq:
      return {};
    case Op::kNot:
      return dual(classify(f.left()));
    case Op::kAnd:
    case Op::kOr:
      return join(classify(f.left()), classify(f.right()));
    case Op::kImplies:
      return join(dual(classify(f.left())), classify(f.right()));
    case Op::kForall:
      return quantify(classify(f.body()), CC::kPi);
    case Op::kExists:
      return quantify(classify(f.body()), CC::kSigma);
    case Op::kForallIn:
    case Op::kExistsIn:
      return classify(f.body());
  }
  return {};
}

// -- satisfaction -----------------------------------------------------------------

namespace {

class Evaluator {
 public:
  explicit Evaluator(const FiniteStructure& m) : m_(m) {}

  bool eval(const Formula& f, Assignment& asg) const {
    switch (f.op()) {
      case Op::kIn: {
        const SetValue& a = value(f.lhs(), asg);
        return extent(f.rhs(), asg).contains(a);
      }
      case Op::kEq:
        return value(f.lhs(), asg) == value(f.rhs(), asg);
      case Op::kNot:
        return !eval(f.left(), asg);
      case Op::kAnd:
        return eval(f.left(), asg) && eval(f.right(), asg);
      case Op::kOr:
        return eval(f.left(), asg) || eval(f.right(), asg);
      case Op::kImplies:
        return !eval(f.left(), asg) || eval(f.right(), asg);
      case Op::kForall:
        return range(f, m_.domain(), asg, true);
      case Op::kExists:
        return range(f, m_.domain(), asg, false);
      case Op::kForallIn: {
        SetValue b = extent(f.bound(), asg);
        return range(f, b, asg, true);
      }
      case Op::kExistsIn: {
        SetValue b = extent(f.bound(), asg);
        return range(f, b, asg, false);
      }
    }
    return false;
  }

 private:
  bool range(const Formula& f, const SetValue& over, Assignment& asg, bool all) const {
    auto saved = asg.find(f.var());
    std::optional<SetValue> old;
    if (saved != asg.end()) old = saved->second;
    bool result = all;
    for (const auto& x : over.elements()) {
      asg[f.var()] = x;
      if (eval(f.body(), asg) != all) {
        result = !all;
        break;
      }
    }
    if (old)
      asg[f.var()] = *old;
    else
      asg.erase(f.var());
    return result;
  }

  const SetValue& value(const Term& t, const Assignment& asg) const {
    if (t.is_var()) {
      auto it = asg.find(t.name);
      if (it == asg.end()) throw MalformedFormula("unassigned variable " + t.name);
      return it->second;
    }
    if (t.is_pred()) throw MalformedFormula("predicate " + t.name + " used as a value");
    if (!m_.domain().contains(t.value))
      throw InterpretationError("constant " + to_string(t.value) +
                                " is not in the structure");
    return t.value;
  }

  const SetValue& extent(const Term& t, const Assignment& asg) const {
    if (t.is_pred()) return m_.predicate(t.name);
    return value(t, asg);
  }

  const FiniteStructure& m_;
};

}  // namespace

bool satisfies(const FiniteStructure& m, const Formula& f, const Assignment& asg) {
  Assignment local = asg;
  return Evaluator(m).eval(f, local);
}

}  // namespace hfv

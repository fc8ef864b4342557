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

// Gödel coding of formulas as hereditarily finite sets.

#include <algorithm>
#include <string_view>

#include "hfv/errors.hpp"
#include "hfv/logic_syntax.hpp"

namespace hfv {

namespace {

constexpr unsigned kConstTag = 3;
constexpr unsigned kSymbolTag = 4;
constexpr unsigned kVarTag = 5;
constexpr std::string_view kVarAlphabet =
    "abcdefghijklmnopqrstuvwxyz0123456789_'ABCDEFGHIJKLMNOPQRSTUVWXYZ";

// Numerals of the logical symbols. 4 is skipped so that no symbol code is
// the singleton {{4}} = ⟨4,4⟩.
unsigned symbol_numeral(Op op) {
  switch (op) {
    case Op::kIn: return 0;
    case Op::kEq: return 1;
    case Op::kNot: return 2;
    case Op::kAnd: return 3;
    case Op::kOr: return 5;
    case Op::kImplies: return 6;
    case Op::kForall: return 7;
    case Op::kExists: return 8;
    case Op::kForallIn: return 9;
    case Op::kExistsIn: return 10;
  }
  return 0;
}

std::optional<Op> op_of_numeral(unsigned n) {
  for (Op op : {Op::kIn, Op::kEq, Op::kNot, Op::kAnd, Op::kOr, Op::kImplies,
                Op::kForall, Op::kExists, Op::kForallIn, Op::kExistsIn})
    if (symbol_numeral(op) == n) return op;
  return std::nullopt;
}

bool is_tagged_code(const SetValue& s) {
  auto p = unpair(s);
  if (!p) return false;
  auto tag = ordinal_value(p->second);
  return tag && *tag >= kConstTag && *tag <= kVarTag;
}

SetValue var_code(const std::string& name) {
  std::vector<SetValue> chars;
  for (char c : name) {
    auto i = kVarAlphabet.find(c);
    if (i == std::string_view::npos)
      throw MalformedFormula("variable name '" + name + "' has an uncodable character");
    chars.push_back(ordinal(static_cast<unsigned>(i)));
  }
  return kpair(encode_sequence(chars), ordinal(kVarTag));
}

class Encoder {
 public:
  Encoder(const Signature& sig, std::vector<SetValue>& out) : sig_(sig), out_(out) {}

  void formula(const Formula& f) {
    out_.push_back(kpair(ordinal(symbol_numeral(f.op())), ordinal(kSymbolTag)));
    switch (f.op()) {
      case Op::kIn:
      case Op::kEq:
        term(f.lhs());
        term(f.rhs());
        return;
      case Op::kNot:
        formula(f.left());
        return;
      case Op::kAnd:
      case Op::kOr:
      case Op::kImplies:
        formula(f.left());
        formula(f.right());
        return;
      case Op::kForall:
      case Op::kExists:
        out_.push_back(var_code(f.var()));
        formula(f.body());
        return;
      case Op::kForallIn:
      case Op::kExistsIn:
        out_.push_back(var_code(f.var()));
        term(f.bound());
        formula(f.body());
        return;
    }
  }

 private:
  void term(const Term& t) {
    switch (t.kind) {
      case TermKind::kVar:
        out_.push_back(var_code(t.name));
        return;
      case TermKind::kConst:
        out_.push_back(kpair(t.value, ordinal(kConstTag)));
        return;
      case TermKind::kPred:
        out_.push_back(predicate_code(sig_, t.name));
        return;
    }
  }

  const Signature& sig_;
  std::vector<SetValue>& out_;
};

struct Symbol {
  enum Kind { kLogical, kConst, kVar, kPred } kind;
  Op op{};
  Term term;
};

class Decoder {
 public:
  Decoder(const Signature& sig, std::vector<SetValue> seq) : sig_(sig), seq_(std::move(seq)) {
    chain_.reserve(sig.extras.size());
    for (const auto& name : sig.extras) chain_.push_back(predicate_code(sig, name));
  }

  Formula run() {
    if (seq_.empty()) throw DecodeError("empty symbol sequence");
    Formula f = formula();
    if (pos_ != seq_.size())
      throw DecodeError("extra symbols after formula at position " + std::to_string(pos_));
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DecodeError(what + " at position " + std::to_string(pos_));
  }

  Symbol next() {
    if (pos_ >= seq_.size()) fail("symbol sequence ends early");
    const SetValue& s = seq_[pos_];
    if (s == sig_.base) return ++pos_, Symbol{Symbol::kPred, {}, Term::pred("M")};
    for (std::size_t k = 0; k < chain_.size(); ++k)
      if (s == chain_[k]) return ++pos_, Symbol{Symbol::kPred, {}, Term::pred(sig_.extras[k])};
    auto p = unpair(s);
    if (!p) fail("symbol is neither a tagged code nor a predicate code");
    auto tag = ordinal_value(p->second);
    if (!tag) fail("symbol tag is not a numeral");
    switch (*tag) {
      case kConstTag:
        ++pos_;
        return {Symbol::kConst, {}, Term::constant(p->first)};
      case kSymbolTag: {
        auto n = ordinal_value(p->first);
        std::optional<Op> op = n ? op_of_numeral(*n) : std::nullopt;
        if (!op) fail("unknown logical symbol");
        ++pos_;
        return {Symbol::kLogical, *op, {}};
      }
      case kVarTag: {
        std::string name;
        std::vector<SetValue> chars;
        try {
          chars = decode_sequence(p->first);
        } catch (const DecodeError&) {
          fail("malformed variable name");
        }
        for (const auto& c : chars) {
          auto i = ordinal_value(c);
          if (!i || *i >= kVarAlphabet.size()) fail("malformed variable name");
          name += kVarAlphabet[*i];
        }
        if (name.empty()) fail("empty variable name");
        ++pos_;
        return {Symbol::kVar, {}, Term::var(name)};
      }
      default:
        fail("unknown predicate or symbol tag " + std::to_string(*tag));
    }
  }

  Term term() {
    Symbol s = next();
    if (s.kind == Symbol::kLogical) fail("expected a term");
    return s.term;
  }

  std::string variable() {
    Symbol s = next();
    if (s.kind != Symbol::kVar) fail("expected a variable");
    return s.term.name;
  }

  Formula formula() {
    Symbol s = next();
    if (s.kind != Symbol::kLogical) fail("expected a logical symbol");
    try {
      switch (s.op) {
        case Op::kIn: {
          Term a = term();
          return Formula::in(a, term());
        }
        case Op::kEq: {
          Term a = term();
          return Formula::eq(a, term());
        }
        case Op::kNot:
          return Formula::negation(formula());
        case Op::kAnd: {
          Formula l = formula();
          return Formula::conj(l, formula());
        }
        case Op::kOr: {
          Formula l = formula();
          return Formula::disj(l, formula());
        }
        case Op::kImplies: {
          Formula l = formula();
          return Formula::implies(l, formula());
        }
        case Op::kForall: {
          std::string v = variable();
          return Formula::forall(v, formula());
        }
        case Op::kExists: {
          std::string v = variable();
          return Formula::exists(v, formula());
        }
        case Op::kForallIn: {
          std::string v = variable();
          Term b = term();
          return Formula::forall_in(v, b, formula());
        }
        case Op::kExistsIn: {
          std::string v = variable();
          Term b = term();
          return Formula::exists_in(v, b, formula());
        }
      }
    } catch (const MalformedFormula& e) {
      fail(e.what());
    }
    fail("unreachable");
  }

  const Signature& sig_;
  std::vector<SetValue> seq_;
  std::vector<SetValue> chain_;
  std::size_t pos_ = 0;
};

}  // namespace

bool Signature::has(std::string_view pred) const {
  return pred == "M" || std::find(extras.begin(), extras.end(), pred) != extras.end();
}

SetValue predicate_code(const Signature& sig, std::string_view pred) {
  if (pred == "M") return sig.base;
  auto it = std::find(sig.extras.begin(), sig.extras.end(), pred);
  if (it == sig.extras.end())
    throw MalformedFormula("predicate " + std::string(pred) + " is not in the signature");
  std::size_t want = static_cast<std::size_t>(it - sig.extras.begin());
  SetValue cur = sig.base;
  for (std::size_t k = 0;;) {
    cur = singleton(cur);
    if (is_tagged_code(cur)) continue;
    if (k == want) return cur;
    ++k;
  }
}

SetValue encode_sequence(const std::vector<SetValue>& items) {
  std::vector<SetValue> pairs;
  pairs.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i)
    pairs.push_back(kpair(ordinal(static_cast<unsigned>(i)), items[i]));
  return SetValue::of(std::move(pairs));
}

std::vector<SetValue> decode_sequence(const SetValue& code) {
  std::vector<std::optional<SetValue>> slots(code.size());
  for (const auto& e : code.elements()) {
    auto p = unpair(e);
    if (!p) throw DecodeError("sequence member is not an ordered pair: " + to_string(e));
    auto i = ordinal_value(p->first);
    if (!i || *i >= slots.size() || slots[*i])
      throw DecodeError("sequence index is missing, repeated or out of range");
    slots[*i] = p->second;
  }
  std::vector<SetValue> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

SetValue encode_formula(const Formula& f, const Signature& sig,
                        const std::set<std::string>& scope) {
  for (const auto& v : free_vars(f))
    if (!scope.count(v)) throw MalformedFormula("free variable " + v + " is not in scope");
  for (const auto& p : predicates(f))
    if (!sig.has(p)) throw MalformedFormula("predicate " + p + " is not in the signature");
  std::vector<SetValue> symbols;
  Encoder(sig, symbols).formula(f);
  return encode_sequence(symbols);
}

Formula decode_formula(const SetValue& code, const Signature& sig) {
  return Decoder(sig, decode_sequence(code)).run();
}

}  // namespace hfv

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

#include "hfv/forcing_engine.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "hfv/errors.hpp"

namespace hfv {

// -- posets -------------------------------------------------------------------

Poset::Poset(std::vector<SetValue> labels,
             const std::vector<std::pair<std::size_t, std::size_t>>& order)
    : labels_(std::move(labels)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw ValidationError("poset has no conditions");
  {
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("repeated condition label");
  }
  leq_.assign(n * n, false);
  for (std::size_t i = 0; i < n; ++i) leq_[i * n + i] = true;
  for (auto [p, q] : order) {
    if (p >= n || q >= n) throw ValidationError("order pair out of range");
    leq_[p * n + q] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq_[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq_[k * n + j]) leq_[i * n + j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq_[i * n + j] && leq_[j * n + i])
        throw ValidationError("order is not antisymmetric: " + to_string(labels_[i]) +
                              " and " + to_string(labels_[j]));
  bool found = false;
  for (std::size_t t = 0; t < n && !found; ++t) {
    bool all = true;
    for (std::size_t i = 0; i < n && all; ++i) all = leq_[i * n + t];
    if (all) top_ = t, found = true;
  }
  if (!found) throw ValidationError("poset has no top element");
  below_.resize(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (leq_[q * n + p]) below_[p].push_back(q);
}

Poset Poset::fan(std::size_t k) {
  std::vector<SetValue> labels;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t i = 0; i <= k; ++i) labels.push_back(ordinal(static_cast<unsigned>(i)));
  for (std::size_t i = 1; i <= k; ++i) order.emplace_back(i, 0);
  return Poset(std::move(labels), order);
}

Poset Poset::chain(std::size_t n) {
  std::vector<SetValue> labels;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(ordinal(static_cast<unsigned>(i)));
  for (std::size_t i = 1; i < n; ++i) order.emplace_back(i, i - 1);
  return Poset(std::move(labels), order);
}

std::vector<Poset> posets_with_top(std::size_t max_conditions) {
  if (max_conditions > 6) throw BudgetError("conditions", "poset enumeration above 6 conditions");
  std::vector<Poset> out;
  for (std::size_t n = 1; n <= max_conditions; ++n) {
    const std::size_t m = n - 1;  // conditions below the top
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) slots.emplace_back(i, j);
    std::vector<std::size_t> perm(m);
    std::vector<std::uint32_t> seen;
    for (std::uint32_t bits = 0; bits < (1u << slots.size()); ++bits) {
      std::vector<bool> r(m * m, false);
      for (std::size_t k = 0; k < slots.size(); ++k)
        if (bits >> k & 1u) r[slots[k].first * m + slots[k].second] = true;
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i)
        for (std::size_t j = 0; j < m && ok; ++j) {
          if (i == j || !r[i * m + j]) continue;
          if (r[j * m + i]) ok = false;
          for (std::size_t k = 0; k < m && ok; ++k)
            if (k != i && r[j * m + k] && !r[i * m + k]) ok = false;
        }
      if (!ok) continue;
      std::iota(perm.begin(), perm.end(), 0);
      std::uint32_t canon = ~0u;
      do {
        std::uint32_t c = 0;
        for (std::size_t k = 0; k < slots.size(); ++k)
          if (r[perm[slots[k].first] * m + perm[slots[k].second]]) c |= 1u << k;
        canon = std::min(canon, c);
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (std::find(seen.begin(), seen.end(), canon) != seen.end()) continue;
      seen.push_back(canon);
      std::vector<SetValue> labels;
      std::vector<std::pair<std::size_t, std::size_t>> order;
      for (std::size_t i = 0; i < n; ++i) labels.push_back(ordinal(static_cast<unsigned>(i)));
      for (std::size_t i = 0; i < m; ++i) {
        order.emplace_back(i + 1, 0);
        for (std::size_t j = 0; j < m; ++j)
          if (i != j && r[i * m + j]) order.emplace_back(i + 1, j + 1);
      }
      out.emplace_back(std::move(labels), order);
    }
  }
  return out;
}

bool Poset::compatible(std::size_t p, std::size_t q) const {
  for (std::size_t r : below_[p])
    if (leq(r, q)) return true;
  return false;
}

std::vector<std::size_t> atoms(const Poset& P) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < P.size(); ++p)
    if (P.below(p).size() == 1) out.push_back(p);
  return out;
}

Filter upward_closure(const Poset& P, std::size_t p) {
  Filter f(P.size(), false);
  for (std::size_t q = 0; q < P.size(); ++q) f[q] = P.leq(p, q);
  return f;
}

std::vector<Filter> generic_filters(const Poset& P) {
  std::vector<Filter> out;
  for (std::size_t a : atoms(P)) out.push_back(upward_closure(P, a));
  return out;
}

bool is_filter(const Poset& P, const Filter& F) {
  if (F.size() != P.size() || !F[P.top()]) return false;
  for (std::size_t p = 0; p < P.size(); ++p) {
    if (!F[p]) continue;
    for (std::size_t q = 0; q < P.size(); ++q)
      if (P.leq(p, q) && !F[q]) return false;
    for (std::size_t q = p + 1; q < P.size(); ++q) {
      if (!F[q]) continue;
      bool common = false;
      for (std::size_t r : P.below(p))
        if (F[r] && P.leq(r, q)) common = true;
      if (!common) return false;
    }
  }
  return true;
}

bool is_dense(const Poset& P, const DenseSet& D) {
  if (D.size() != P.size()) return false;
  for (std::size_t p = 0; p < P.size(); ++p) {
    bool hit = false;
    for (std::size_t q : P.below(p)) hit = hit || D[q];
    if (!hit) return false;
  }
  return true;
}

std::optional<std::size_t> generic_atom(const Poset& P, const Filter& G) {
  for (std::size_t a : atoms(P))
    if (upward_closure(P, a) == G) return a;
  return std::nullopt;
}

CccReport is_ccc(const Poset& P) {
  const std::size_t n = P.size();
  if (n > 24) throw BudgetError("conditions", "antichain search over more than 24 conditions");
  std::vector<std::uint32_t> clash(n, 0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (P.compatible(p, q)) clash[p] |= 1u << q;
  CccReport r;
  std::uint32_t best = 0;
  std::function<void(std::size_t, std::uint32_t, std::uint32_t)> grow =
      [&](std::size_t i, std::uint32_t chosen, std::uint32_t banned) {
        if (std::popcount(chosen) > std::popcount(best)) best = chosen;
        for (std::size_t q = i; q < n; ++q)
          if (!(banned >> q & 1u)) grow(q + 1, chosen | 1u << q, banned | clash[q]);
      };
  grow(0, 0, 0);
  for (std::size_t p = 0; p < n; ++p)
    if (best >> p & 1u) r.witness.push_back(p);
  r.max_antichain = r.witness.size();
  return r;
}

// -- names --------------------------------------------------------------------

struct PName::Node {
  std::vector<std::pair<PName, std::size_t>> cons;
  unsigned rank;
  std::size_t hash;
};

PName::PName() = default;

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

bool operator<(const PName& a, const PName& b) noexcept {
  if (a.node_ == b.node_) return false;
  if (a.rank() != b.rank()) return a.rank() < b.rank();
  const auto& x = a.constituents();
  const auto& y = b.constituents();
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i].first == y[i].first)) return x[i].first < y[i].first;
    if (x[i].second != y[i].second) return x[i].second < y[i].second;
  }
  return x.size() < y.size();
}

PName PName::of(std::vector<std::pair<PName, std::size_t>> cons) {
  std::sort(cons.begin(), cons.end());
  cons.erase(std::unique(cons.begin(), cons.end()), cons.end());
  if (cons.empty()) return PName();
  unsigned r = 0;
  std::size_t h = 0x84222325cbf29ce4ULL;
  for (const auto& [m, p] : cons) {
    r = std::max(r, m.rank() + 1);
    h = mix(mix(h, m.hash()), p);
  }
  static std::mutex mu;
  static std::unordered_multimap<std::size_t, std::weak_ptr<const Node>> table;
  std::lock_guard lock(mu);
  auto [lo, hi] = table.equal_range(h);
  for (auto it = lo; it != hi;) {
    auto n = it->second.lock();
    if (!n) {
      it = table.erase(it);
      continue;
    }
    ++it;
    if (n->cons == cons) return PName(std::move(n));
  }
  auto node = std::make_shared<const Node>(Node{std::move(cons), r, h});
  table.emplace(h, node);
  return PName(std::move(node));
}

const std::vector<std::pair<PName, std::size_t>>& PName::constituents() const {
  static const std::vector<std::pair<PName, std::size_t>> none;
  return node_ ? node_->cons : none;
}

unsigned PName::rank() const { return node_ ? node_->rank : 0; }
std::size_t PName::hash() const { return node_ ? node_->hash : 0x51ed27u; }

PName check_name(const SetValue& x, const Poset& P) {
  std::vector<std::pair<PName, std::size_t>> cons;
  for (const auto& y : x.elements()) cons.emplace_back(check_name(y, P), P.top());
  return PName::of(std::move(cons));
}

PName generic_name(const Poset& P) {
  std::vector<std::pair<PName, std::size_t>> cons;
  for (std::size_t p = 0; p < P.size(); ++p) cons.emplace_back(check_name(P.label(p), P), p);
  return PName::of(std::move(cons));
}

SetValue hull(const PName& n) {
  std::vector<SetValue> out;
  for (const auto& [m, p] : n.constituents()) out.push_back(hull(m));
  return SetValue::of(std::move(out));
}

SetValue eval_name(const PName& n, const Filter& G) {
  std::vector<SetValue> out;
  for (const auto& [m, p] : n.constituents())
    if (p < G.size() && G[p]) out.push_back(eval_name(m, G));
  return SetValue::of(std::move(out));
}

void Namespace::add(const PName& n) {
  if (contains(n)) return;
  for (const auto& [m, p] : n.constituents()) add(m);
  names.insert(std::lower_bound(names.begin(), names.end(), n), n);
}

bool Namespace::contains(const PName& n) const {
  return std::binary_search(names.begin(), names.end(), n);
}

unsigned ordinal_height(const SetValue& s) {
  unsigned h = 0;
  while (s.contains(ordinal(h))) ++h;
  return h;
}

Namespace standard_namespace(const FiniteStructure& M, const Poset& P, unsigned cap,
                             std::size_t max_names) {
  Namespace ns;
  for (const auto& x : M.domain().elements()) ns.add(check_name(x, P));
  const auto g = generic_name(P);
  if (g.rank() <= cap) ns.add(g);
  if (ns.names.size() > max_names)
    throw BudgetError("names", "namespace exceeds " + std::to_string(max_names) + " names");
  return ns;
}

bool poset_in(const Poset& P, const FiniteStructure& M) {
  const auto& D = M.domain();
  for (const auto& l : P.labels())
    if (!D.contains(l)) return false;
  const auto L = P.label_set();
  return D.contains(L) && !is_subset(ordinal(ordinal_height(D)), L);
}

FiniteStructure extension(const FiniteStructure& M, const Poset& P, const Filter& G,
                          unsigned cap, std::size_t max_elements) {
  if (cap > 16) throw BudgetError("name rank", "name-rank cap above 16");
  if (!poset_in(P, M)) throw ValidationError("poset is not in the ground model");
  if (!generic_atom(P, G)) throw ValidationError("filter is not generic");
  std::vector<SetValue> out(M.domain().elements().begin(), M.domain().elements().end());
  const auto g = generic_name(P);
  if (g.rank() <= cap) out.push_back(eval_name(g, G));
  auto dom = SetValue::of(std::move(out));
  if (dom.size() > max_elements)
    throw BudgetError("elements", "extension has " + std::to_string(dom.size()) + " elements");
  return FiniteStructure(dom);
}

// -- forcing relation ---------------------------------------------------------

namespace {

void check_class(const Formula& phi) {
  const auto c = classify(phi);
  if (!(c.is_delta0() || (c.kind == ComplexityClass::kSigma && c.level == 1)))
    throw ClassificationError("forcing supports Δ0 and Σ1 formulas, got " + to_string(c));
  for (const auto& p : predicates(phi))
    if (p != "M") throw ClassificationError("predicate " + p + " is not interpreted by forcing");
}

// Closes the namespace under the names φ can mention.
Namespace prepared(const ForcingQuery& q, const Formula& phi) {
  Namespace ns = q.ns;
  std::vector<PName> closure;
  for (const auto& n : ns.names) closure.push_back(n);
  ns.names.clear();
  for (const auto& n : closure) ns.add(n);
  for (const auto& [v, n] : q.env) ns.add(n);
  for (const auto& c : constants(phi)) ns.add(check_name(c, q.P));
  return ns;
}

class Forcer {
 public:
  Forcer(const ForcingQuery& q, Namespace ns)
      : P_(q.P), ns_(std::move(ns)), env_(q.env), mcheck_(check_name(q.M.domain(), q.P)) {}

  bool force(std::size_t p, const Formula& f) {
    switch (f.op()) {
      case Op::kIn:
        return in(p, name(f.lhs()), name(f.rhs()));
      case Op::kEq:
        return eq(p, name(f.lhs()), name(f.rhs()));
      case Op::kNot:
        for (std::size_t q : P_.below(p))
          if (force(q, f.body())) return false;
        return true;
      case Op::kAnd:
        return force(p, f.left()) && force(p, f.right());
      case Op::kOr:
        return dense_below(p, [&](std::size_t q) {
          return force(q, f.left()) || force(q, f.right());
        });
      case Op::kImplies:
        return dense_below(p, [&](std::size_t q) {
          return force(q, Formula::negation(f.left())) || force(q, f.right());
        });
      case Op::kForallIn: {
        const PName b = name(f.bound());
        for (const auto& [m, s] : b.constituents())
          for (std::size_t q : P_.below(p))
            if (P_.leq(q, s) && !with(f.var(), m, [&] { return force(q, f.body()); }))
              return false;
        return true;
      }
      case Op::kExistsIn: {
        const PName b = name(f.bound());
        return dense_below(p, [&](std::size_t q) {
          for (const auto& [m, s] : b.constituents())
            if (P_.leq(q, s) && with(f.var(), m, [&] { return force(q, f.body()); }))
              return true;
          return false;
        });
      }
      case Op::kForall:
        for (const auto& m : ns_.names)
          if (!with(f.var(), m, [&] { return force(p, f.body()); })) return false;
        return true;
      case Op::kExists:
        return dense_below(p, [&](std::size_t q) {
          for (const auto& m : ns_.names)
            if (with(f.var(), m, [&] { return force(q, f.body()); })) return true;
          return false;
        });
    }
    return false;
  }

 private:
  template <class Pred>
  bool dense_below(std::size_t p, Pred&& pred) {
    std::vector<signed char> known(P_.size(), -1);
    const auto at = [&](std::size_t r) {
      if (known[r] < 0) known[r] = pred(r) ? 1 : 0;
      return known[r] == 1;
    };
    for (std::size_t q : P_.below(p)) {
      bool hit = false;
      for (std::size_t r : P_.below(q))
        if (at(r)) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
    return true;
  }

  template <class Fn>
  bool with(const std::string& var, const PName& m, Fn&& fn) {
    auto it = env_.find(var);
    std::optional<PName> saved;
    if (it != env_.end()) saved = it->second;
    env_[var] = m;
    const bool r = fn();
    if (saved) env_[var] = *saved;
    else env_.erase(var);
    return r;
  }

  PName name(const Term& t) {
    switch (t.kind) {
      case TermKind::kVar: {
        auto it = env_.find(t.name);
        if (it == env_.end()) throw MalformedFormula("no name for free variable " + t.name);
        return it->second;
      }
      case TermKind::kConst:
        return check_name(t.value, P_);
      case TermKind::kPred:
        if (t.name != "M") throw ClassificationError("predicate " + t.name + " is not interpreted by forcing");
        return mcheck_;
    }
    return PName();
  }

  struct Key {
    std::size_t p;
    const void* a;
    const void* b;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return mix(mix(std::hash<const void*>()(k.a), std::hash<const void*>()(k.b)), k.p);
    }
  };

  // p ⊩ a ∈ b: densely below p some (m, s) ∈ b has q ≤ s and q ⊩ a = m.
  bool in(std::size_t p, const PName& a, const PName& b) {
    const Key k{p, a.id(), b.id()};
    if (auto it = in_memo_.find(k); it != in_memo_.end()) return it->second;
    const bool r = dense_below(p, [&](std::size_t q) {
      for (const auto& [m, s] : b.constituents())
        if (P_.leq(q, s) && eq(q, a, m)) return true;
      return false;
    });
    in_memo_[k] = r;
    return r;
  }

  // p ⊩ a = b: every constituent of either side is forced into the other
  // wherever its condition holds.
  bool eq(std::size_t p, const PName& a, const PName& b) {
    if (a == b) return true;
    const Key k{p, a.id() < b.id() ? a.id() : b.id(), a.id() < b.id() ? b.id() : a.id()};
    if (auto it = eq_memo_.find(k); it != eq_memo_.end()) return it->second;
    const auto half = [&](const PName& x, const PName& y) {
      for (const auto& [m, s] : x.constituents())
        for (std::size_t q : P_.below(p))
          if (P_.leq(q, s) && !in(q, m, y)) return false;
      return true;
    };
    const bool r = half(a, b) && half(b, a);
    eq_memo_[k] = r;
    return r;
  }

  const Poset& P_;
  Namespace ns_;
  NameEnv env_;
  PName mcheck_;
  std::unordered_map<Key, bool, KeyHash> in_memo_, eq_memo_;
};

}  // namespace

bool forces_syntactic(std::size_t p, const Formula& phi, const ForcingQuery& q) {
  check_class(phi);
  if (p >= q.P.size()) throw ValidationError("condition out of range");
  Forcer f(q, prepared(q, phi));
  return f.force(p, phi);
}

bool forces_semantic(std::size_t p, const Formula& phi, const ForcingQuery& q) {
  check_class(phi);
  if (p >= q.P.size()) throw ValidationError("condition out of range");
  const Namespace ns = prepared(q, phi);
  for (std::size_t a : atoms(q.P)) {
    if (!q.P.leq(a, p)) continue;
    const Filter G = upward_closure(q.P, a);
    std::vector<SetValue> dom;
    for (const auto& n : ns.names) dom.push_back(eval_name(n, G));
    const auto ext = FiniteStructure(SetValue::of(std::move(dom))).with_predicate("M", q.M.domain());
    Assignment asg;
    for (const auto& [v, n] : q.env) asg[v] = eval_name(n, G);
    if (!satisfies(ext, phi, asg)) return false;
  }
  return true;
}

bool MaReport::holds() const {
  return std::all_of(entries.begin(), entries.end(), [](const MaEntry& e) { return e.holds(); });
}

MaReport absolute_ma_check(const FiniteStructure& M, const Poset& P,
                           const std::vector<Formula>& pool, unsigned cap,
                           const std::string& var) {
  MaReport rep;
  rep.ccc = is_ccc(P);
  const ForcingQuery q{M, P, standard_namespace(M, P, cap), {}};
  const auto ground = M.has_predicate("M") ? M : M.with_predicate("M", M.domain());
  for (const auto& phi : pool) {
    for (const auto& v : free_vars(phi))
      if (v != var) throw MalformedFormula("free variable " + v + " besides " + var);
    MaEntry e{phi, false, std::nullopt, false, std::nullopt};
    const auto ex = Formula::exists(var, phi);
    for (std::size_t p = 0; p < P.size() && !e.antecedent; ++p)
      if (forces_syntactic(p, ex, q)) e.antecedent = true, e.condition = p;
    for (const auto& y : M.domain().elements())
      if (satisfies(ground, phi, {{var, y}})) {
        e.consequent = true, e.witness = y;
        break;
      }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

// -- file format --------------------------------------------------------------

Poset parse_poset(std::string_view text) {
  std::vector<SetValue> labels;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  const auto index = [&](const SetValue& l, std::size_t line) {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw ParseError("undeclared condition " + to_string(l), line);
    return static_cast<std::size_t>(it - labels.begin());
  };
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find(';'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      if (auto le = line.find("<="); le != std::string::npos) {
        const auto a = index(parse_set(line.substr(0, le)), lineno);
        const auto b = index(parse_set(line.substr(le + 2)), lineno);
        order.emplace_back(a, b);
      } else {
        auto l = parse_set(line);
        if (std::find(labels.begin(), labels.end(), l) != labels.end())
          throw ParseError("repeated condition " + to_string(l), lineno);
        labels.push_back(std::move(l));
      }
    } catch (const ParseError& e) {
      if (e.line()) throw;
      throw ParseError(e.what(), lineno);
    }
  }
  return Poset(std::move(labels), order);
}

std::string write_poset(const Poset& P) {
  std::string out;
  for (const auto& l : P.labels()) out += to_string(l) + "\n";
  for (std::size_t p = 0; p < P.size(); ++p)
    for (std::size_t q = 0; q < P.size(); ++q)
      if (p != q && P.leq(p, q)) out += to_string(P.label(p)) + " <= " + to_string(P.label(q)) + "\n";
  return out;
}

}  // namespace hfv

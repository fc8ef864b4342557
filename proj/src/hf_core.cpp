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

#include "hfv/hf_core.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <unordered_map>

#include "hfv/errors.hpp"

namespace hfv {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

SetValue SetValue::from_sorted_unique(std::vector<SetValue> elems) {
  if (elems.empty()) return SetValue();
  unsigned r = 0;
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& e : elems) {
    r = std::max(r, e.rank() + 1);
    h = mix(h, e.hash());
  }
  h = mix(h, elems.size());

  // Hash-consing: equal sets share one node, so equality is pointer
  // equality and comparisons stop at the first differing element.
  static std::mutex mu;
  static std::unordered_multimap<std::size_t, std::weak_ptr<const Node>> table;
  static std::size_t sweep_at = 1u << 16;
  std::lock_guard lock(mu);
  auto [lo, hi] = table.equal_range(h);
  for (auto it = lo; it != hi;) {
    auto n = it->second.lock();
    if (!n) {
      it = table.erase(it);
      continue;
    }
    ++it;
    if (n->elems.size() != elems.size()) continue;
    bool same = true;
    for (std::size_t i = 0; same && i < elems.size(); ++i)
      same = n->elems[i].node_ == elems[i].node_;
    if (same) return SetValue(std::move(n));
  }
  auto node = std::make_shared<const Node>(Node{std::move(elems), r, h});
  table.emplace(h, node);
  if (table.size() >= sweep_at) {
    std::erase_if(table, [](const auto& kv) { return kv.second.expired(); });
    sweep_at = std::max<std::size_t>(1u << 16, 2 * table.size());
  }
  return SetValue(std::move(node));
}

SetValue SetValue::of(std::vector<SetValue> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return from_sorted_unique(std::move(elems));
}

std::span<const SetValue> SetValue::elements() const noexcept {
  if (!node_) return {};
  return {node_->elems.data(), node_->elems.size()};
}

bool SetValue::contains(const SetValue& x) const {
  if (!node_ || x.rank() >= rank()) return false;
  return std::binary_search(node_->elems.begin(), node_->elems.end(), x);
}

bool operator==(const SetValue& a, const SetValue& b) noexcept {
  return a.node_ == b.node_;  // nodes are interned
}

std::strong_ordering operator<=>(const SetValue& a, const SetValue& b) noexcept {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.rank() <=> b.rank(); c != 0) return c;
  auto ea = a.elements();
  auto eb = b.elements();
  return std::lexicographical_compare_three_way(ea.begin(), ea.end(), eb.begin(),
                                                eb.end());
}

SetValue make_set(std::vector<SetValue> elems) { return SetValue::of(std::move(elems)); }
SetValue empty_set() { return SetValue(); }
SetValue singleton(const SetValue& x) { return SetValue::of({x}); }
SetValue unordered_pair(const SetValue& x, const SetValue& y) {
  return SetValue::of({x, y});
}
SetValue kpair(const SetValue& x, const SetValue& y) {
  return unordered_pair(singleton(x), unordered_pair(x, y));
}

std::optional<std::pair<SetValue, SetValue>> unpair(const SetValue& p) {
  auto e = p.elements();
  if (e.size() == 1) {
    // {{x}} = ⟨x,x⟩
    if (e[0].size() != 1) return std::nullopt;
    return std::pair{e[0].elements()[0], e[0].elements()[0]};
  }
  if (e.size() != 2) return std::nullopt;
  // Canonical order puts {x} before {x,y} only when ranks allow; check both.
  for (int i = 0; i < 2; ++i) {
    const SetValue& s = e[i];
    const SetValue& t = e[1 - i];
    if (s.size() == 1 && t.size() == 2 && t.contains(s.elements()[0])) {
      const SetValue& x = s.elements()[0];
      const SetValue& y = t.elements()[0] == x ? t.elements()[1] : t.elements()[0];
      return std::pair{x, y};
    }
  }
  return std::nullopt;
}

SetValue ordinal(unsigned n) {
  std::vector<SetValue> elems;
  elems.reserve(n);
  SetValue cur;
  for (unsigned i = 0; i < n; ++i) {
    elems.push_back(cur);
    cur = SetValue::of(elems);
  }
  return cur;
}

std::optional<unsigned> ordinal_value(const SetValue& x) {
  if (!is_ordinal(x)) return std::nullopt;
  return static_cast<unsigned>(x.size());
}

SetValue powerset(const SetValue& x, std::size_t max_size) {
  auto e = x.elements();
  if (e.size() > max_size)
    throw BudgetError("powerset", "set of size " + std::to_string(e.size()) +
                                      " exceeds " + std::to_string(max_size));
  std::vector<SetValue> out;
  const std::size_t n = e.size();
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<SetValue> sub;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) sub.push_back(e[i]);
    out.push_back(SetValue::of(std::move(sub)));
  }
  return SetValue::of(std::move(out));
}

SetValue stage(unsigned n, unsigned budget) {
  if (n > budget)
    throw BudgetError("stage", "V_" + std::to_string(n) + " requested, budget is " +
                                   std::to_string(budget));
  SetValue v;
  for (unsigned i = 0; i < n; ++i) v = powerset(v, 16);
  return v;
}

unsigned rank(const SetValue& x) { return x.rank(); }

SetValue transitive_closure(const SetValue& x) {
  std::vector<SetValue> out;
  std::vector<SetValue> todo(x.elements().begin(), x.elements().end());
  std::vector<SetValue> seen;
  while (!todo.empty()) {
    SetValue y = std::move(todo.back());
    todo.pop_back();
    auto it = std::lower_bound(seen.begin(), seen.end(), y);
    if (it != seen.end() && *it == y) continue;
    seen.insert(it, y);
    for (const auto& z : y.elements()) todo.push_back(z);
  }
  return SetValue::of(std::move(seen));
}

bool is_subset(const SetValue& x, const SetValue& y) {
  if (x.size() > y.size()) return false;
  auto ex = x.elements();
  auto ey = y.elements();
  return std::includes(ey.begin(), ey.end(), ex.begin(), ex.end());
}

bool is_transitive(const SetValue& x) {
  for (const auto& y : x.elements())
    if (!is_subset(y, x)) return false;
  return true;
}

bool is_ordinal(const SetValue& x) {
  // A transitive set of transitive sets; for HF sets this is n = {0..n-1}.
  if (!is_transitive(x)) return false;
  for (const auto& y : x.elements())
    if (!is_transitive(y)) return false;
  return true;
}

SetValue set_union(const SetValue& x, const SetValue& y) {
  std::vector<SetValue> out;
  auto ex = x.elements();
  auto ey = y.elements();
  std::set_union(ex.begin(), ex.end(), ey.begin(), ey.end(), std::back_inserter(out));
  return SetValue::from_sorted_unique(std::move(out));
}

SetValue difference(const SetValue& x, const SetValue& y) {
  std::vector<SetValue> out;
  auto ex = x.elements();
  auto ey = y.elements();
  std::set_difference(ex.begin(), ex.end(), ey.begin(), ey.end(),
                      std::back_inserter(out));
  return SetValue::from_sorted_unique(std::move(out));
}

SetValue intersection(const SetValue& x, const SetValue& y) {
  std::vector<SetValue> out;
  auto ex = x.elements();
  auto ey = y.elements();
  std::set_intersection(ex.begin(), ex.end(), ey.begin(), ey.end(),
                        std::back_inserter(out));
  return SetValue::from_sorted_unique(std::move(out));
}

SetValue big_union(const SetValue& x) {
  std::vector<SetValue> out;
  for (const auto& y : x.elements())
    for (const auto& z : y.elements()) out.push_back(z);
  return SetValue::of(std::move(out));
}

SetValue successor(const SetValue& x) { return set_union(x, singleton(x)); }

SetValue filter(const SetValue& x, const std::function<bool(const SetValue&)>& keep) {
  std::vector<SetValue> out;
  for (const auto& y : x.elements())
    if (keep(y)) out.push_back(y);
  return SetValue::of(std::move(out));
}

namespace {

void skip_ws(std::string_view t, std::size_t& pos) {
  while (pos < t.size() &&
         (std::isspace(static_cast<unsigned char>(t[pos])) || t[pos] == ','))
    ++pos;
}

}  // namespace

SetValue parse_set_at(std::string_view text, std::size_t& pos) {
  skip_ws(text, pos);
  if (pos >= text.size()) throw ParseError("unexpected end of set notation");
  if (text[pos] == '#') {
    std::size_t start = ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (start == pos) throw ParseError("expected digits after '#'");
    unsigned n = static_cast<unsigned>(std::stoul(std::string(text.substr(start, pos - start))));
    if (n > 64) throw ParseError("natural #" + std::to_string(n) + " too large");
    return ordinal(n);
  }
  if (text[pos] != '{')
    throw ParseError("expected '{' at offset " + std::to_string(pos) + ", got '" +
                     std::string(1, text[pos]) + "'");
  ++pos;
  std::vector<SetValue> elems;
  for (;;) {
    skip_ws(text, pos);
    if (pos >= text.size()) throw ParseError("unterminated set notation");
    if (text[pos] == '}') {
      ++pos;
      return SetValue::of(std::move(elems));
    }
    elems.push_back(parse_set_at(text, pos));
  }
}

SetValue parse_set(std::string_view text) {
  std::size_t pos = 0;
  SetValue s = parse_set_at(text, pos);
  skip_ws(text, pos);
  if (pos != text.size())
    throw ParseError("trailing characters after set at offset " + std::to_string(pos));
  return s;
}

std::string to_string(const SetValue& x) {
  std::string out = "{";
  bool first = true;
  for (const auto& y : x.elements()) {
    if (!first) out += ' ';
    first = false;
    out += to_string(y);
  }
  out += '}';
  return out;
}

}  // namespace hfv

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

#include "hfv/tree_coding.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hfv/errors.hpp"

namespace hfv {

std::size_t RawTree::add_node(std::string label) {
  children.emplace_back();
  if (!label.empty() || !labels.empty()) {
    labels.resize(children.size() - 1);
    labels.push_back(std::move(label));
  }
  return children.size() - 1;
}

void RawTree::add_edge(std::size_t parent, std::size_t child) {
  children.at(parent).push_back(child);
}

namespace {

std::vector<std::size_t> dedup(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Children-first order of the nodes reachable from root, or nullopt when a
// cycle is reachable (then `cycle` holds an edge closing it).
std::optional<std::vector<std::size_t>> topo_order(
    const std::vector<std::vector<std::size_t>>& ch, std::size_t root,
    std::pair<std::size_t, std::size_t>* cycle = nullptr) {
  enum : char { kWhite, kGrey, kBlack };
  std::vector<char> color(ch.size(), kWhite);
  std::vector<std::size_t> order;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
  color[root] = kGrey;
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i < ch[v].size()) {
      std::size_t c = ch[v][i++];
      if (color[c] == kGrey) {
        if (cycle) *cycle = {v, c};
        return std::nullopt;
      }
      if (color[c] == kWhite) {
        color[c] = kGrey;
        stack.emplace_back(c, 0);
      }
    } else {
      color[v] = kBlack;
      order.push_back(v);
      stack.pop_back();
    }
  }
  return order;
}

// Tree-isomorphism classes of the unfoldings (multiset semantics) for the
// nodes listed in children-first order.
std::vector<std::size_t> iso_classes(const std::vector<std::vector<std::size_t>>& ch,
                                     const std::vector<std::size_t>& order) {
  std::vector<std::size_t> cls(ch.size(), static_cast<std::size_t>(-1));
  std::map<std::vector<std::size_t>, std::size_t> table;
  for (std::size_t v : order) {
    std::vector<std::size_t> key;
    for (std::size_t c : dedup(ch[v])) key.push_back(cls[c]);
    std::sort(key.begin(), key.end());
    auto [it, fresh] = table.emplace(std::move(key), table.size());
    cls[v] = it->second;
  }
  return cls;
}

}  // namespace

// Hash-conses nodes by their set of children and emits canonical trees.
class QuotientBuilder {
 public:
  std::size_t node(std::vector<std::size_t> kids) {
    kids = dedup(std::move(kids));
    auto [it, fresh] = table_.emplace(kids, nodes_.size());
    if (fresh) nodes_.push_back(std::move(kids));
    return it->second;
  }

  std::size_t add(const QuotientTree& q, std::size_t v, std::vector<std::size_t>& memo) {
    if (memo.empty()) memo.assign(q.size(), static_cast<std::size_t>(-1));
    if (memo[v] != static_cast<std::size_t>(-1)) return memo[v];
    std::vector<std::size_t> kids;
    for (std::size_t c : q.children(v)) kids.push_back(add(q, c, memo));
    return memo[v] = node(std::move(kids));
  }

  std::size_t add(const QuotientTree& q) {
    std::vector<std::size_t> memo;
    return add(q, q.root(), memo);
  }

  const std::vector<std::size_t>& kids(std::size_t id) const { return nodes_[id]; }

  QuotientTree finish(std::size_t root, std::vector<std::size_t>* index_out = nullptr) const {
    auto order = topo_order(nodes_, root);
    std::vector<unsigned> height(nodes_.size(), 0);
    for (std::size_t v : *order)
      for (std::size_t c : nodes_[v]) height[v] = std::max(height[v], height[c] + 1);
    std::vector<std::size_t> reach = *order;
    std::vector<std::size_t> index(nodes_.size(), static_cast<std::size_t>(-1));
    std::stable_sort(reach.begin(), reach.end(),
                     [&](std::size_t a, std::size_t b) { return height[a] < height[b]; });
    QuotientTree q;
    std::size_t i = 0;
    while (i < reach.size()) {
      std::size_t j = i;
      while (j < reach.size() && height[reach[j]] == height[reach[i]]) ++j;
      std::vector<std::pair<std::vector<std::size_t>, std::size_t>> level;
      for (std::size_t k = i; k < j; ++k) {
        std::vector<std::size_t> key;
        for (std::size_t c : nodes_[reach[k]]) key.push_back(index[c]);
        std::sort(key.begin(), key.end());
        level.emplace_back(std::move(key), reach[k]);
      }
      std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return a.first < b.first;
      });
      for (auto& [key, id] : level) {
        index[id] = q.children_.size();
        q.children_.push_back(std::move(key));
      }
      i = j;
    }
    q.root_ = index[root];
    if (index_out) *index_out = std::move(index);
    return q;
  }

 private:
  std::vector<std::vector<std::size_t>> nodes_;
  std::map<std::vector<std::size_t>, std::size_t> table_;
};

CodingPairReport validate_coding_pair(const RawTree& t) {
  CodingPairReport r;
  auto fail = [&](CodingClause c, std::vector<std::size_t> w, std::string msg) {
    r.ok = false;
    r.clause = c;
    r.witnesses = std::move(w);
    r.message = std::move(msg);
    return r;
  };
  if (t.children.empty()) return fail(CodingClause::kUniqueDistance, {}, "empty tree");
  if (t.root >= t.size()) return fail(CodingClause::kUniqueDistance, {}, "root out of range");
  for (std::size_t v = 0; v < t.size(); ++v)
    for (std::size_t c : t.children[v])
      if (c >= t.size())
        return fail(CodingClause::kUniqueDistance, {v}, "edge to a missing node");

  std::pair<std::size_t, std::size_t> back{};
  auto order = topo_order(t.children, t.root, &back);
  if (!order)
    return fail(CodingClause::kWellFounded, {back.first, back.second},
                "(iv) R is not well-founded: cycle through nodes " +
                    std::to_string(back.first) + " and " + std::to_string(back.second));

  // (i) every node reachable, all paths from the top of equal length.
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> lo(t.size(), kUnset), hi(t.size(), 0);
  lo[t.root] = 0;
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    std::size_t v = *it;
    for (std::size_t c : t.children[v]) {
      lo[c] = std::min(lo[c], lo[v] + 1);
      hi[c] = std::max(hi[c], hi[v] + 1);
    }
  }
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (lo[v] == kUnset)
      return fail(CodingClause::kUniqueDistance, {v},
                  "(i) node " + std::to_string(v) + " has no finite distance from the top");
    if (lo[v] != hi[v])
      return fail(CodingClause::kUniqueDistance, {v},
                  "(i) node " + std::to_string(v) + " lies at distances " +
                      std::to_string(lo[v]) + " and " + std::to_string(hi[v]));
  }

  // (iii) with (i) in force, two distinct parents of one child sit at the
  // same distance.
  std::vector<std::size_t> parent(t.size(), kUnset);
  for (std::size_t v = 0; v < t.size(); ++v)
    for (std::size_t c : dedup(t.children[v])) {
      if (parent[c] != kUnset && parent[c] != v)
        return fail(CodingClause::kLevelsDisjoint, {parent[c], v, c},
                    "(iii) nodes " + std::to_string(parent[c]) + " and " +
                        std::to_string(v) + " at distance " + std::to_string(lo[v]) +
                        " share child " + std::to_string(c));
      parent[c] = v;
    }

  // (ii) sibling subtrees pairwise non-isomorphic.
  auto cls = iso_classes(t.children, *order);
  for (std::size_t v = 0; v < t.size(); ++v) {
    std::map<std::size_t, std::size_t> seen;
    for (std::size_t c : dedup(t.children[v])) {
      auto [it, fresh] = seen.emplace(cls[c], c);
      if (!fresh)
        return fail(CodingClause::kSiblingsDistinct, {v, it->second, c},
                    "(ii) children " + std::to_string(it->second) + " and " +
                        std::to_string(c) + " of node " + std::to_string(v) +
                        " have isomorphic subtrees");
    }
  }
  r.message = "coding pair";
  return r;
}

CodingTree CodingTree::from_raw(RawTree t) {
  auto rep = validate_coding_pair(t);
  if (!rep.ok) throw ValidationError("not a coding pair: " + rep.message);
  return CodingTree(std::move(t));
}

CodingTree encode_set(const SetValue& x) {
  RawTree t;
  std::function<std::size_t(const SetValue&)> build = [&](const SetValue& s) {
    std::size_t v = t.add_node();
    for (const auto& e : s.elements()) {
      std::size_t c = build(e);
      t.children[v].push_back(c);
    }
    return v;
  };
  t.root = build(x);
  return CodingTree::from_raw(std::move(t));
}

QuotientTree quotient(const CodingTree& ct) {
  const RawTree& t = ct.raw();
  auto order = topo_order(t.children, t.root);
  auto cls = iso_classes(t.children, *order);
  std::size_t nclasses = *std::max_element(cls.begin(), cls.end()) + 1;
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> rep(nclasses, kUnset);
  for (std::size_t v = 0; v < t.size(); ++v) rep[cls[v]] = std::min(rep[cls[v]], v);
  // [a] R [b] iff a0 R b0 for some a0 in [a], b0 in [b]
  std::vector<std::vector<std::size_t>> edges(nclasses);
  for (std::size_t v = 0; v < t.size(); ++v)
    for (std::size_t c : t.children[v]) edges[cls[v]].push_back(cls[c]);
  QuotientBuilder b;
  std::vector<std::size_t> built(nclasses, kUnset);
  for (std::size_t v : *order) {
    std::size_t c = cls[v];
    if (built[c] != kUnset) continue;
    std::vector<std::size_t> kids;
    for (std::size_t d : edges[c]) kids.push_back(built[d]);
    built[c] = b.node(std::move(kids));
  }
  std::vector<std::size_t> index;
  QuotientTree q = b.finish(built[cls[t.root]], &index);
  q.reps_.assign(q.size(), kUnset);
  for (std::size_t c = 0; c < nclasses; ++c) {
    std::size_t& slot = q.reps_[index[built[c]]];
    slot = std::min(slot, rep[c]);
  }
  return q;
}

QuotientTree quotient(const QuotientTree& q) {
  QuotientBuilder b;
  std::size_t r = b.add(q);
  return b.finish(r);
}

QuotientTree QuotientTree::subtree(std::size_t v) const {
  QuotientBuilder b;
  std::vector<std::size_t> memo;
  std::size_t r = b.add(*this, v, memo);
  return b.finish(r);
}

RawTree QuotientTree::to_raw() const {
  RawTree t;
  t.children = children_;
  t.root = root_;
  return t;
}

SetValue decode(const QuotientTree& q) {
  std::vector<SetValue> val(q.size());
  // children precede parents in canonical order
  for (std::size_t v = 0; v < q.size(); ++v) {
    std::vector<SetValue> es;
    for (std::size_t c : q.children(v)) es.push_back(val[c]);
    val[v] = SetValue::of(std::move(es));
  }
  return val[q.root()];
}

QuotientTree quotient_of_set(const SetValue& x) {
  QuotientBuilder b;
  std::map<SetValue, std::size_t> memo;
  std::function<std::size_t(const SetValue&)> go = [&](const SetValue& s) {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    std::vector<std::size_t> kids;
    for (const auto& e : s.elements()) kids.push_back(go(e));
    std::size_t id = b.node(std::move(kids));
    memo.emplace(s, id);
    return id;
  };
  return b.finish(go(x));
}

SetValue rep_pair(const SetValue& x, const SetValue& y) {
  std::vector<SetValue> out;
  for (const auto& z : x.elements()) out.push_back(kpair(z, ordinal(1)));
  for (const auto& z : y.elements()) out.push_back(kpair(z, ordinal(2)));
  return SetValue::of(std::move(out));
}

bool tt_equal(const QuotientTree& q1, const QuotientTree& q2) {
  // Interning both trees in one table identifies isomorphic subtrees.
  QuotientBuilder b;
  return b.add(q1) == b.add(q2);
}

bool et_related(const QuotientTree& q1, const QuotientTree& q2) {
  QuotientBuilder b;
  std::vector<std::size_t> memo;
  std::size_t top = b.add(q1, q1.root(), memo);
  std::size_t target = b.add(q2);
  const auto& kids = b.kids(top);
  return std::find(kids.begin(), kids.end(), target) != kids.end();
}

QuotientTree pairing_plus(const QuotientTree& q1, const QuotientTree& q2) {
  QuotientBuilder b;
  std::size_t a = b.add(q1);
  std::size_t c = b.add(q2);
  return b.finish(b.node({a, c}));
}

QuotientTree union_plus(const QuotientTree& q) {
  QuotientBuilder b;
  std::vector<std::size_t> memo;
  std::size_t top = b.add(q, q.root(), memo);
  std::vector<std::size_t> grand;
  for (std::size_t y : b.kids(top))
    for (std::size_t z : b.kids(y)) grand.push_back(z);
  return b.finish(b.node(std::move(grand)));
}

QuotientTree separation_plus(const QuotientTree& q, const Formula& phi,
                             const FiniteStructure& ctx) {
  auto fv = free_vars(phi);
  if (fv.size() != 1)
    throw ArityError("separation formula must have exactly one free variable, has " +
                     std::to_string(fv.size()));
  const std::string& var = *fv.begin();
  QuotientBuilder b;
  std::vector<std::size_t> memo;
  b.add(q, q.root(), memo);
  std::vector<std::size_t> kept;
  for (std::size_t c : q.children(q.root())) {
    SetValue y = decode(q.subtree(c));
    if (satisfies(ctx, phi, {{var, y}})) kept.push_back(memo[c]);
  }
  return b.finish(b.node(std::move(kept)));
}

bool is_extensional_quotient(const QuotientTree& q) {
  std::vector<std::vector<std::size_t>> ch(q.size());
  for (std::size_t v = 0; v < q.size(); ++v) ch[v] = q.children(v);
  auto order = topo_order(ch, q.root());
  if (!order || order->size() != q.size()) return false;
  auto cls = iso_classes(ch, *order);
  std::set<std::size_t> distinct(cls.begin(), cls.end());
  if (distinct.size() != q.size()) return false;
  for (std::size_t v = 0; v < q.size(); ++v)
    if (dedup(ch[v]).size() != ch[v].size()) return false;
  return true;
}

bool transitivity_check(const QuotientTree& q) {
  for (std::size_t y : q.children(q.root())) {
    QuotientTree ty = q.subtree(y);
    if (!is_extensional_quotient(ty)) return false;
    for (std::size_t z : q.children(y)) {
      QuotientTree tz = q.subtree(z);
      if (!et_related(ty, tz)) return false;
    }
  }
  return is_extensional_quotient(q);
}

// -- outline format -------------------------------------------------------------

RawTree parse_outline(std::string_view text) {
  RawTree t;
  std::map<std::string, std::size_t> by_label;
  std::vector<std::size_t> stack;  // node at each depth
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool any_label = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(' ');
    if (first == std::string::npos || line[first] == '#') continue;
    if (first % 2) throw ParseError("indentation must be a multiple of two spaces", lineno);
    std::size_t depth = first / 2;
    char kind = line[first];
    if (kind != '-' && kind != '=') throw ParseError("expected '-' or '='", lineno);
    std::string label = line.substr(first + 1);
    label.erase(0, label.find_first_not_of(' '));
    while (!label.empty() && (label.back() == ' ' || label.back() == '\r')) label.pop_back();
    if (depth > stack.size()) throw ParseError("indentation skips a level", lineno);
    if (depth == 0 && !t.children.empty()) throw ParseError("second top node", lineno);
    stack.resize(depth);
    if (kind == '=') {
      if (depth == 0) throw ParseError("the top node cannot be a reference", lineno);
      auto it = by_label.find(label);
      if (it == by_label.end()) throw ParseError("unknown node label '" + label + "'", lineno);
      t.add_edge(stack.back(), it->second);
      continue;
    }
    std::size_t v = t.add_node(label);
    if (!label.empty()) {
      any_label = true;
      if (!by_label.emplace(label, v).second)
        throw ParseError("duplicate node label '" + label + "'", lineno);
    }
    if (depth > 0) t.add_edge(stack.back(), v);
    stack.push_back(v);
  }
  if (t.children.empty()) throw ParseError("empty outline");
  if (!any_label) t.labels.clear();
  t.root = 0;
  return t;
}

std::string write_outline(const RawTree& t) {
  std::vector<std::size_t> indeg(t.size(), 0);
  for (const auto& ch : t.children)
    for (std::size_t c : ch) ++indeg[c];
  auto label = [&](std::size_t v) -> std::string {
    if (v < t.labels.size() && !t.labels[v].empty()) return t.labels[v];
    if (indeg[v] > 1 || (v == t.root && indeg[v] > 0)) return "n" + std::to_string(v);
    return "";
  };
  std::string out;
  std::vector<bool> done(t.size(), false);
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t v, std::size_t depth) {
    std::string pad(2 * depth, ' ');
    if (done[v]) {
      out += pad + "= " + label(v) + "\n";
      return;
    }
    done[v] = true;
    std::string l = label(v);
    out += pad + "-" + (l.empty() ? "" : " " + l) + "\n";
    for (std::size_t c : t.children[v]) go(c, depth + 1);
  };
  go(t.root, 0);
  return out;
}

}  // namespace hfv

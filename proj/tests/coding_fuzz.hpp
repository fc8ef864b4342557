// Coding-pair mutations and an independent clause oracle.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hfv/tree_coding.hpp"

namespace gen {

// Copies the subtree below v into fresh nodes of t.
inline std::size_t clone(hfv::RawTree& t, std::size_t v) {
  std::size_t c = t.add_node();
  std::vector<std::size_t> kids = t.children[v];
  for (std::size_t k : kids) {
    std::size_t d = clone(t, k);
    t.children[c].push_back(d);
  }
  return c;
}

inline std::vector<std::size_t> depths(const hfv::RawTree& t) {
  std::vector<std::size_t> d(t.size(), 0);
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t v, std::size_t k) {
    d[v] = k;
    for (std::size_t c : t.children[v]) go(c, k + 1);
  };
  go(t.root, 0);
  return d;
}

// One random structural edit of a coding tree: a back-edge, a duplicated
// child subtree, a node sharing a child across a level, or an edge that
// skips levels. nullopt when the chosen edit does not apply.
inline std::optional<hfv::RawTree> mutate_coding(const hfv::RawTree& base, std::mt19937& rng) {
  auto d = depths(base);
  std::vector<std::size_t> inner;
  for (std::size_t v = 0; v < base.size(); ++v)
    if (!base.children[v].empty()) inner.push_back(v);
  if (inner.empty()) return std::nullopt;
  std::size_t v = inner[rng() % inner.size()];
  hfv::RawTree t = base;
  switch (rng() % 4) {
    case 0: {
      std::size_t leafward = v;
      while (!t.children[leafward].empty()) leafward = t.children[leafward][0];
      t.add_edge(leafward, v);
      return t;
    }
    case 1: {
      std::size_t c = t.children[v][rng() % t.children[v].size()];
      t.add_edge(v, clone(t, c));
      return t;
    }
    case 2: {
      std::size_t w = t.add_node();
      t.add_edge(w, t.children[v][0]);
      if (v == t.root) {
        t.root = t.add_node();
        t.add_edge(t.root, v);
        t.add_edge(t.root, w);
      } else {
        for (std::size_t u = 0; u < base.size(); ++u)
          for (std::size_t k : base.children[u])
            if (k == v) {
              t.add_edge(u, w);
              return t;
            }
      }
      return t;
    }
    default: {
      std::size_t deepest = 0;
      for (std::size_t u = 0; u < base.size(); ++u)
        if (d[u] > d[deepest]) deepest = u;
      if (d[deepest] < 2) return std::nullopt;
      t.add_edge(t.root, deepest);
      return t;
    }
  }
}

// Which of the four conditions a raw tree breaks, computed directly from the
// definitions: path-length sets by breadth-first search over (node, length),
// parents counted per node, subtrees compared by canonical strings.
struct ClauseOracle {
  bool unique_distance = true, siblings_distinct = true, levels_disjoint = true, well_founded = true;

  explicit ClauseOracle(const hfv::RawTree& t) {
    const std::size_t n = t.size();
    // Well-foundedness of the part below the top: colour DFS.
    std::vector<int> colour(n, 0);
    std::function<void(std::size_t)> dfs = [&](std::size_t v) {
      colour[v] = 1;
      for (std::size_t c : t.children[v]) {
        if (colour[c] == 1) well_founded = false;
        else if (colour[c] == 0) dfs(c);
      }
      colour[v] = 2;
    };
    dfs(t.root);
    if (!well_founded) return;
    std::vector<std::set<std::size_t>> lengths(n);
    std::vector<std::pair<std::size_t, std::size_t>> frontier{{t.root, 0}};
    while (!frontier.empty()) {
      std::vector<std::pair<std::size_t, std::size_t>> next;
      for (auto [v, k] : frontier)
        if (lengths[v].insert(k).second)
          for (std::size_t c : t.children[v]) next.emplace_back(c, k + 1);
      frontier = std::move(next);
    }
    for (const auto& l : lengths)
      if (l.size() != 1) unique_distance = false;
    std::vector<std::set<std::size_t>> parents(n);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t c : t.children[v]) parents[c].insert(v);
    for (const auto& p : parents)
      if (p.size() > 1) levels_disjoint = false;
    std::function<std::string(std::size_t)> canon = [&](std::size_t v) {
      std::set<std::string> kids;
      for (std::size_t c : t.children[v]) kids.insert(canon(c));
      std::string s = "(";
      for (const auto& k : kids) s += k;
      return s + ")";
    };
    for (std::size_t v = 0; v < n; ++v) {
      std::set<std::size_t> distinct(t.children[v].begin(), t.children[v].end());
      std::set<std::string> seen;
      for (std::size_t c : distinct)
        if (!seen.insert(canon(c)).second) siblings_distinct = false;
    }
  }

  // The validator's reporting order: (iv), then (i), (iii), (ii).
  hfv::CodingClause first() const {
    using C = hfv::CodingClause;
    if (!well_founded) return C::kWellFounded;
    if (!unique_distance) return C::kUniqueDistance;
    if (!levels_disjoint) return C::kLevelsDisjoint;
    if (!siblings_distinct) return C::kSiblingsDistinct;
    return C::kNone;
  }
};

}  // namespace gen

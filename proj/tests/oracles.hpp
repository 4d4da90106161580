#pragma once

// Naive reference implementations used as ground truth in the tests. They
// only share the Edge container with the library: enumeration runs over all
// edge subsets or all sequences, without the library's pruning.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "hypercouple/core.hpp"

namespace oracle {

using hypercouple::Edge;
using hypercouple::Vertex;

inline void combinations(int n, int r, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(static_cast<std::size_t>(r));
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == r) {
      fn(idx);
      return;
    }
    for (int i = start; i <= n - (r - pos); ++i) {
      idx[static_cast<std::size_t>(pos)] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

inline std::vector<Edge> all_edges(int n, int k) {
  std::vector<Edge> out;
  combinations(n, k, [&](const std::vector<int>& c) {
    std::vector<Vertex> vs;
    for (int i : c) vs.push_back(i + 1);
    out.push_back(Edge::from(vs));
  });
  return out;
}

/// All unordered completion sets C with base + C simple and d-regular.
inline std::vector<std::vector<Edge>> regular_completions(int n, int k, int d, const std::vector<Edge>& base) {
  std::vector<int> deg(static_cast<std::size_t>(n + 1), 0);
  for (const auto& e : base)
    for (Vertex v : e) ++deg[static_cast<std::size_t>(v)];
  const int M = n * d / k;
  const int need = M - static_cast<int>(base.size());
  std::vector<Edge> cands;
  for (const auto& e : all_edges(n, k))
    if (std::find(base.begin(), base.end(), e) == base.end()) cands.push_back(e);
  std::vector<std::vector<Edge>> out;
  if (need < 0 || (n * d) % k != 0) return out;
  combinations(static_cast<int>(cands.size()), need, [&](const std::vector<int>& c) {
    auto dd = deg;
    for (int i : c)
      for (Vertex v : cands[static_cast<std::size_t>(i)]) ++dd[static_cast<std::size_t>(v)];
    for (int v = 1; v <= n; ++v)
      if (dd[static_cast<std::size_t>(v)] != d) return;
    std::vector<Edge> set;
    for (int i : c) set.push_back(cands[static_cast<std::size_t>(i)]);
    out.push_back(set);
  });
  return out;
}

inline mpz_class factorial(unsigned long n) {
  mpz_class f = 1;
  for (unsigned long i = 2; i <= n; ++i) f *= i;
  return f;
}

/// p(e | base) for every e outside base.
inline std::map<Edge, mpq_class> next_edge_law(int n, int k, int d, const std::vector<Edge>& base) {
  const auto comps = regular_completions(n, k, d, base);
  const int rem = n * d / k - static_cast<int>(base.size());
  std::map<Edge, mpq_class> law;
  for (const auto& e : all_edges(n, k)) {
    if (std::find(base.begin(), base.end(), e) != base.end()) continue;
    long cnt = 0;
    for (const auto& c : comps)
      if (std::find(c.begin(), c.end(), e) != c.end()) ++cnt;
    law[e] = mpq_class(cnt, static_cast<long>(comps.size()) * rem);
    law[e].canonicalize();
  }
  return law;
}

inline int pair_deg(const std::vector<Edge>& H, Vertex u, Vertex v) {
  int c = 0;
  for (const auto& e : H)
    if (e.contains(u) && e.contains(v)) ++c;
  return c;
}

/// cod_{H|G}(u, v) straight from the definition.
inline int cod(const std::vector<Edge>& H, const std::vector<Edge>& G, Vertex u, Vertex v) {
  int c = 0;
  for (const auto& e : H) {
    if (!e.contains(u) || e.contains(v)) continue;
    std::vector<Vertex> w;
    for (Vertex x : e) w.push_back(x == u ? v : x);
    const auto f = Edge::from(w);
    const bool in_h = std::find(H.begin(), H.end(), f) != H.end();
    const bool in_g = std::find(G.begin(), G.end(), f) != G.end();
    if (in_h && !in_g) ++c;
  }
  return c;
}

/// (simple, total) over all distinct permutations of the residual multiset.
inline std::pair<std::uint64_t, std::uint64_t> simple_permutations(int n, int k, int d, const std::vector<Edge>& base) {
  std::vector<int> deg(static_cast<std::size_t>(n + 1), 0);
  for (const auto& e : base)
    for (Vertex v : e) ++deg[static_cast<std::size_t>(v)];
  std::vector<Vertex> ms;
  for (int v = 1; v <= n; ++v)
    for (int i = 0; i < d - deg[static_cast<std::size_t>(v)]; ++i) ms.push_back(v);
  std::uint64_t simple = 0, total = 0;
  do {
    ++total;
    std::set<std::vector<Vertex>> seen;
    for (const auto& e : base) seen.insert(std::vector<Vertex>(e.begin(), e.end()));
    bool ok = true;
    for (std::size_t i = 0; ok && i < ms.size(); i += static_cast<std::size_t>(k)) {
      std::vector<Vertex> t(ms.begin() + static_cast<std::ptrdiff_t>(i), ms.begin() + static_cast<std::ptrdiff_t>(i) + k);
      std::sort(t.begin(), t.end());
      if (std::adjacent_find(t.begin(), t.end()) != t.end()) ok = false;
      else if (!seen.insert(t).second) ok = false;
    }
    simple += ok;
  } while (std::next_permutation(ms.begin(), ms.end()));
  return {simple, total};
}

/// Every permutation of [1, n], windows at stride k - l from position 0.
/// Consecutive windows must share exactly l vertices.
inline bool hamiltonian_all_permutations(int n, int k, int ell, const std::set<Edge>& H) {
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  const int s = k - ell;
  do {
    bool ok = true;
    std::vector<std::vector<Vertex>> windows;
    for (int start = 0; ok && start < n; start += s) {
      std::vector<Vertex> w;
      for (int i = 0; i < k; ++i) w.push_back(order[static_cast<std::size_t>((start + i) % n)]);
      std::sort(w.begin(), w.end());
      if (std::adjacent_find(w.begin(), w.end()) != w.end() || !H.count(Edge::from(w))) ok = false;
      windows.push_back(w);
    }
    for (std::size_t i = 0; ok && i < windows.size(); ++i) {
      const auto& a = windows[i];
      const auto& b = windows[(i + 1) % windows.size()];
      std::vector<Vertex> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      if (static_cast<int>(common.size()) != ell) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

/// Edge sets of every l-Hamilton cycle of K_n^(k), from all permutations.
/// H is l-Hamiltonian iff one of them is a subset of H.
inline std::set<std::vector<Edge>> hamilton_cycle_edge_sets(int n, int k, int ell) {
  std::set<std::vector<Edge>> out;
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  const int s = k - ell;
  if (n % s != 0) return out;
  do {
    std::vector<std::vector<Vertex>> windows;
    for (int start = 0; start < n; start += s) {
      std::vector<Vertex> w;
      for (int i = 0; i < k; ++i) w.push_back(order[static_cast<std::size_t>((start + i) % n)]);
      std::sort(w.begin(), w.end());
      windows.push_back(w);
    }
    bool ok = true;
    for (std::size_t i = 0; ok && i < windows.size(); ++i) {
      const auto& a = windows[i];
      const auto& b = windows[(i + 1) % windows.size()];
      std::vector<Vertex> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      ok = std::adjacent_find(a.begin(), a.end()) == a.end() && static_cast<int>(common.size()) == ell;
    }
    if (!ok) continue;
    std::vector<Edge> es;
    for (const auto& w : windows) es.push_back(Edge::from(w));
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    out.insert(es);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

}  // namespace oracle

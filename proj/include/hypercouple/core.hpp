#pragma once

// k-uniform hypergraph representations and degree machinery.
//
// Vertices are 1-based ids in [1, n]. Edges are stored sorted, so equality
// of Edge values is set equality.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "hypercouple/error.hpp"

namespace hypercouple {

using Vertex = int;

inline constexpr int kMaxUniformity = 8;

/// binom(n, r) with overflow detection; throws kTooLarge on overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

/// Instance descriptor: n vertices, uniformity k, target degree d, M = nd/k edges.
struct Params {
  int n = 0;
  int k = 0;
  int d = 0;
  int M = 0;

  /// Validates k | nd, 2 <= k <= n, 1 <= d <= binom(n-1, k-1).
  static Params make(int n, int k, int d);
  /// As make() but without the d <= binom(n-1, k-1) cap, for counting
  /// queries whose answer is then simply 0.
  static Params make_relaxed(int n, int k, int d);

  /// binom(n-1, k-1): the degree of every vertex of K_n.
  std::uint64_t max_degree() const { return binomial(n - 1, k - 1); }
  std::uint64_t total_edges() const { return binomial(n, k); }
  bool is_complete() const { return static_cast<std::uint64_t>(d) == max_degree(); }

  friend bool operator==(const Params&, const Params&) = default;
};

/// k distinct vertices in increasing order.
class Edge {
 public:
  Edge() = default;
  Edge(std::initializer_list<Vertex> vertices);

  /// Sorts the input; throws kDomain on repeats or size outside [1, kMaxUniformity].
  static Edge from(std::span<const Vertex> vertices);

  int size() const { return size_; }
  Vertex operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  const Vertex* begin() const { return v_.data(); }
  const Vertex* end() const { return v_.data() + size_; }
  bool contains(Vertex v) const;
  std::span<const Vertex> vertices() const { return {v_.data(), static_cast<std::size_t>(size_)}; }

  /// Lexicographic on the sorted tuple.
  friend std::strong_ordering operator<=>(const Edge& a, const Edge& b);
  friend bool operator==(const Edge& a, const Edge& b);

  std::string to_string() const;

 private:
  std::array<Vertex, kMaxUniformity> v_{};
  int size_ = 0;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept;
};

/// Colex rank in the combinatorial number system, 0 <= rank < binom(n, k).
std::uint64_t colex_rank(const Edge& e);
Edge colex_unrank(std::uint64_t rank, int k);

/// k vertices in non-decreasing order; repeats allowed (configuration-model output).
class MultiEdge {
 public:
  MultiEdge() = default;
  static MultiEdge from(std::span<const Vertex> vertices);
  explicit MultiEdge(const Edge& e) : MultiEdge(from(e.vertices())) {}

  int size() const { return size_; }
  Vertex operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  const Vertex* begin() const { return v_.data(); }
  const Vertex* end() const { return v_.data() + size_; }
  bool is_loop() const;
  /// The underlying Edge; throws kDomain for loops.
  Edge to_edge() const;

  friend std::strong_ordering operator<=>(const MultiEdge& a, const MultiEdge& b);
  friend bool operator==(const MultiEdge& a, const MultiEdge& b);

 private:
  std::array<Vertex, kMaxUniformity> v_{};
  int size_ = 0;
};

/// Simple k-graph on [1, n] as an edge set with cached degrees.
class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(int n, int k);
  Hypergraph(int n, int k, std::span<const Edge> edges);

  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  bool contains(const Edge& e) const { return edges_.count(e) != 0; }
  /// Returns false if e was already present. Throws kDomain on bad vertices or size.
  bool add(const Edge& e);
  bool remove(const Edge& e);

  int degree(Vertex v) const;
  const std::vector<int>& degrees() const { return degree_; }
  int max_degree() const;

  /// Edges in lexicographic order.
  std::vector<Edge> sorted_edges() const;
  const std::unordered_set<Edge, EdgeHash>& edge_set() const { return edges_; }

  bool is_subgraph_of(const Hypergraph& other) const;
  friend bool operator==(const Hypergraph& a, const Hypergraph& b);

  void check_edge(const Edge& e) const;

 private:
  int n_ = 0;
  int k_ = 0;
  std::unordered_set<Edge, EdgeHash> edges_;
  std::vector<int> degree_;  // index 0 unused
};

/// Edge sequence whose prefixes are process states G(t) / R(t).
class OrderedHypergraph {
 public:
  OrderedHypergraph() = default;
  OrderedHypergraph(int n, int k);
  OrderedHypergraph(int n, int k, std::span<const Edge> edges);

  int n() const { return graph_.n(); }
  int k() const { return graph_.k(); }
  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }

  /// Throws kDomain if e is already present.
  void push_back(const Edge& e);
  void pop_back();
  const Edge& operator[](std::size_t i) const { return order_[i]; }
  const std::vector<Edge>& edges() const { return order_; }
  bool contains(const Edge& e) const { return graph_.contains(e); }

  OrderedHypergraph prefix(std::size_t t) const;
  const Hypergraph& as_set() const { return graph_; }
  int degree(Vertex v) const { return graph_.degree(v); }

  friend bool operator==(const OrderedHypergraph& a, const OrderedHypergraph& b) {
    return a.order_ == b.order_ && a.n() == b.n() && a.k() == b.k();
  }

 private:
  Hypergraph graph_;
  std::vector<Edge> order_;
};

/// Residual degrees r_G(v) = d - deg_G(v) and the process clock.
struct DegreeState {
  std::vector<int> residual;  // index 0 unused
  int t = 0;
  double tau = 1.0;    // 1 - t/M
  double delta = 0.0;  // sqrt(a * tau * ln n / d)
  double a = 0.0;

  int r(Vertex v) const { return residual[static_cast<std::size_t>(v)]; }
  long long total() const;
};

/// Default concentration constant a = 3(k+2).
inline double default_concentration_constant(int k) { return 3.0 * (k + 2); }

int degree(const Hypergraph& H, Vertex v);
int pair_degree(const Hypergraph& H, Vertex u, Vertex v);
/// |{W : W+u in H, W+v in H \ G}|; requires G subset of H. Not symmetric in (u, v).
int codegree_rel(const Hypergraph& H, const Hypergraph& G, Vertex u, Vertex v);

/// Throws kInadmissible when some degree exceeds d or t > M.
DegreeState residual_state(const OrderedHypergraph& G, const Params& params, double a);
DegreeState residual_state(const OrderedHypergraph& G, const Params& params);

/// Calls fn for every k-subset of [1, n] in lexicographic order.
void for_each_k_subset(int n, int k, const std::function<void(const Edge&)>& fn);
/// Every k-subset not in G, lexicographic.
std::vector<Edge> complement_edges(const Hypergraph& G);
void for_each_complement_edge(const Hypergraph& G, const std::function<void(const Edge&)>& fn);
Hypergraph complete_hypergraph(int n, int k);

/// No loops and no two equal multisets.
bool is_simple(std::span<const MultiEdge> edges);

}  // namespace hypercouple

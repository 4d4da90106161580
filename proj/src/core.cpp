#include "hypercouple/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hypercouple {

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    result = result * (n - r + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max())
      fail(ErrorCode::kTooLarge, "binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

Params Params::make(int n, int k, int d) {
  require(k >= 2, ErrorCode::kDomain, "uniformity k must be at least 2");
  require(k <= kMaxUniformity, ErrorCode::kDomain,
          "uniformity k exceeds " + std::to_string(kMaxUniformity));
  require(n >= k, ErrorCode::kDomain, "need n >= k");
  require(d >= 1, ErrorCode::kDomain, "degree d must be positive");
  const auto cap = binomial(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(k - 1));
  require(static_cast<std::uint64_t>(d) <= cap, ErrorCode::kDomain,
          "degree d exceeds binom(n-1, k-1) = " + std::to_string(cap));
  const long long nd = static_cast<long long>(n) * d;
  require(nd % k == 0, ErrorCode::kDomain, "k must divide n*d");
  require(nd / k <= std::numeric_limits<int>::max(), ErrorCode::kTooLarge, "edge count too large");
  return Params{n, k, d, static_cast<int>(nd / k)};
}

Params Params::make_relaxed(int n, int k, int d) {
  require(k >= 2 && k <= kMaxUniformity, ErrorCode::kDomain, "uniformity k out of range");
  require(n >= k, ErrorCode::kDomain, "need n >= k");
  require(d >= 1, ErrorCode::kDomain, "degree d must be positive");
  const long long nd = static_cast<long long>(n) * d;
  require(nd % k == 0, ErrorCode::kDomain, "k must divide n*d");
  require(nd / k <= std::numeric_limits<int>::max(), ErrorCode::kTooLarge, "edge count too large");
  return Params{n, k, d, static_cast<int>(nd / k)};
}

// ---------------------------------------------------------------- Edge

Edge::Edge(std::initializer_list<Vertex> vertices)
    : Edge(from(std::span<const Vertex>(vertices.begin(), vertices.size()))) {}

Edge Edge::from(std::span<const Vertex> vertices) {
  require(!vertices.empty() && vertices.size() <= static_cast<std::size_t>(kMaxUniformity),
          ErrorCode::kDomain, "edge size out of range");
  Edge e;
  e.size_ = static_cast<int>(vertices.size());
  std::copy(vertices.begin(), vertices.end(), e.v_.begin());
  std::sort(e.v_.begin(), e.v_.begin() + e.size_);
  for (int i = 1; i < e.size_; ++i)
    require(e.v_[i] != e.v_[i - 1], ErrorCode::kDomain, "edge has a repeated vertex");
  return e;
}

bool Edge::contains(Vertex v) const {
  return std::binary_search(begin(), end(), v);
}

std::strong_ordering operator<=>(const Edge& a, const Edge& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

bool operator==(const Edge& a, const Edge& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

std::string Edge::to_string() const {
  std::string out = "{";
  for (int i = 0; i < size_; ++i) {
    if (i) out += ',';
    out += std::to_string(v_[i]);
  }
  return out + "}";
}

std::size_t EdgeHash::operator()(const Edge& e) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Vertex v : e) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

std::uint64_t colex_rank(const Edge& e) {
  std::uint64_t rank = 0;
  for (int i = 0; i < e.size(); ++i)
    rank += binomial(static_cast<std::uint64_t>(e[i] - 1), static_cast<std::uint64_t>(i + 1));
  return rank;
}

Edge colex_unrank(std::uint64_t rank, int k) {
  std::array<Vertex, kMaxUniformity> v{};
  for (int i = k; i >= 1; --i) {
    // largest c with binom(c, i) <= rank
    std::uint64_t c = static_cast<std::uint64_t>(i) - 1;
    while (binomial(c + 1, static_cast<std::uint64_t>(i)) <= rank) ++c;
    rank -= binomial(c, static_cast<std::uint64_t>(i));
    v[static_cast<std::size_t>(i - 1)] = static_cast<Vertex>(c + 1);
  }
  return Edge::from(std::span<const Vertex>(v.data(), static_cast<std::size_t>(k)));
}

// ---------------------------------------------------------------- MultiEdge

MultiEdge MultiEdge::from(std::span<const Vertex> vertices) {
  require(!vertices.empty() && vertices.size() <= static_cast<std::size_t>(kMaxUniformity),
          ErrorCode::kDomain, "multi-edge size out of range");
  MultiEdge e;
  e.size_ = static_cast<int>(vertices.size());
  std::copy(vertices.begin(), vertices.end(), e.v_.begin());
  std::sort(e.v_.begin(), e.v_.begin() + e.size_);
  return e;
}

bool MultiEdge::is_loop() const {
  return std::adjacent_find(begin(), end()) != end();
}

Edge MultiEdge::to_edge() const {
  return Edge::from(std::span<const Vertex>(v_.data(), static_cast<std::size_t>(size_)));
}

std::strong_ordering operator<=>(const MultiEdge& a, const MultiEdge& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

bool operator==(const MultiEdge& a, const MultiEdge& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------- Hypergraph

Hypergraph::Hypergraph(int n, int k) : n_(n), k_(k), degree_(static_cast<std::size_t>(n) + 1, 0) {
  require(k >= 1 && k <= kMaxUniformity, ErrorCode::kDomain, "uniformity out of range");
  require(n >= 1, ErrorCode::kDomain, "need at least one vertex");
}

Hypergraph::Hypergraph(int n, int k, std::span<const Edge> edges) : Hypergraph(n, k) {
  for (const auto& e : edges)
    require(add(e), ErrorCode::kDomain, "duplicate edge " + e.to_string());
}

void Hypergraph::check_edge(const Edge& e) const {
  require(e.size() == k_, ErrorCode::kDomain, "edge " + e.to_string() + " has wrong size");
  require(e[0] >= 1 && e[e.size() - 1] <= n_, ErrorCode::kDomain,
          "edge " + e.to_string() + " has a vertex outside [1, n]");
}

bool Hypergraph::add(const Edge& e) {
  check_edge(e);
  if (!edges_.insert(e).second) return false;
  for (Vertex v : e) ++degree_[static_cast<std::size_t>(v)];
  return true;
}

bool Hypergraph::remove(const Edge& e) {
  if (edges_.erase(e) == 0) return false;
  for (Vertex v : e) --degree_[static_cast<std::size_t>(v)];
  return true;
}

int Hypergraph::degree(Vertex v) const {
  require(v >= 1 && v <= n_, ErrorCode::kDomain, "vertex " + std::to_string(v) + " out of range");
  return degree_[static_cast<std::size_t>(v)];
}

int Hypergraph::max_degree() const {
  return degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end());
}

std::vector<Edge> Hypergraph::sorted_edges() const {
  std::vector<Edge> out(edges_.begin(), edges_.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool Hypergraph::is_subgraph_of(const Hypergraph& other) const {
  if (edges_.size() > other.edges_.size()) return false;
  return std::all_of(edges_.begin(), edges_.end(),
                     [&](const Edge& e) { return other.contains(e); });
}

bool operator==(const Hypergraph& a, const Hypergraph& b) {
  return a.n_ == b.n_ && a.k_ == b.k_ && a.edges_ == b.edges_;
}

// ---------------------------------------------------------------- OrderedHypergraph

OrderedHypergraph::OrderedHypergraph(int n, int k) : graph_(n, k) {}

OrderedHypergraph::OrderedHypergraph(int n, int k, std::span<const Edge> edges) : graph_(n, k) {
  order_.reserve(edges.size());
  for (const auto& e : edges) push_back(e);
}

void OrderedHypergraph::push_back(const Edge& e) {
  require(graph_.add(e), ErrorCode::kDomain, "ordered k-graph already contains " + e.to_string());
  order_.push_back(e);
}

void OrderedHypergraph::pop_back() {
  graph_.remove(order_.back());
  order_.pop_back();
}

OrderedHypergraph OrderedHypergraph::prefix(std::size_t t) const {
  require(t <= order_.size(), ErrorCode::kDomain, "prefix longer than the sequence");
  return OrderedHypergraph(n(), k(), std::span<const Edge>(order_.data(), t));
}

// ---------------------------------------------------------------- degrees

long long DegreeState::total() const {
  return std::accumulate(residual.begin(), residual.end(), 0LL);
}

int degree(const Hypergraph& H, Vertex v) { return H.degree(v); }

int pair_degree(const Hypergraph& H, Vertex u, Vertex v) {
  require(u != v, ErrorCode::kDomain, "pair degree needs distinct vertices");
  require(u >= 1 && u <= H.n() && v >= 1 && v <= H.n(), ErrorCode::kDomain, "vertex out of range");
  int count = 0;
  for (const auto& e : H.edge_set())
    if (e.contains(u) && e.contains(v)) ++count;
  return count;
}

int codegree_rel(const Hypergraph& H, const Hypergraph& G, Vertex u, Vertex v) {
  require(u != v, ErrorCode::kDomain, "codegree needs distinct vertices");
  require(u >= 1 && u <= H.n() && v >= 1 && v <= H.n(), ErrorCode::kDomain, "vertex out of range");
  require(G.is_subgraph_of(H), ErrorCode::kDomain, "codegree_rel requires G to be a subgraph of H");
  int count = 0;
  std::array<Vertex, kMaxUniformity> buf{};
  for (const auto& e : H.edge_set()) {
    if (!e.contains(u) || e.contains(v)) continue;
    int i = 0;
    for (Vertex w : e) buf[static_cast<std::size_t>(i++)] = (w == u) ? v : w;
    const Edge partner = Edge::from(std::span<const Vertex>(buf.data(), static_cast<std::size_t>(i)));
    if (H.contains(partner) && !G.contains(partner)) ++count;
  }
  return count;
}

DegreeState residual_state(const OrderedHypergraph& G, const Params& params, double a) {
  require(G.n() == params.n && G.k() == params.k, ErrorCode::kDomain, "graph does not match params");
  const int t = static_cast<int>(G.size());
  require(t <= params.M, ErrorCode::kInadmissible, "prefix has more than M edges");
  DegreeState state;
  state.residual.assign(static_cast<std::size_t>(params.n) + 1, 0);
  for (Vertex v = 1; v <= params.n; ++v) {
    const int r = params.d - G.degree(v);
    require(r >= 0, ErrorCode::kInadmissible,
            "inadmissible prefix: vertex " + std::to_string(v) + " has degree above d");
    state.residual[static_cast<std::size_t>(v)] = r;
  }
  state.t = t;
  state.a = a;
  state.tau = 1.0 - static_cast<double>(t) / params.M;
  state.delta = std::sqrt(a * state.tau * std::log(static_cast<double>(params.n)) / params.d);
  if (state.total() != static_cast<long long>(params.k) * (params.M - t))
    fail(ErrorCode::kInternal, "residual sum invariant violated");
  return state;
}

DegreeState residual_state(const OrderedHypergraph& G, const Params& params) {
  return residual_state(G, params, default_concentration_constant(params.k));
}

// ---------------------------------------------------------------- enumeration helpers

void for_each_k_subset(int n, int k, const std::function<void(const Edge&)>& fn) {
  if (k < 1 || k > n) return;
  std::vector<Vertex> c(static_cast<std::size_t>(k));
  std::iota(c.begin(), c.end(), 1);
  while (true) {
    fn(Edge::from(c));
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) return;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

void for_each_complement_edge(const Hypergraph& G, const std::function<void(const Edge&)>& fn) {
  for_each_k_subset(G.n(), G.k(), [&](const Edge& e) {
    if (!G.contains(e)) fn(e);
  });
}

std::vector<Edge> complement_edges(const Hypergraph& G) {
  std::vector<Edge> out;
  for_each_complement_edge(G, [&](const Edge& e) { out.push_back(e); });
  return out;
}

Hypergraph complete_hypergraph(int n, int k) {
  Hypergraph H(n, k);
  for_each_k_subset(n, k, [&](const Edge& e) { H.add(e); });
  return H;
}

bool is_simple(std::span<const MultiEdge> edges) {
  std::vector<MultiEdge> sorted(edges.begin(), edges.end());
  for (const auto& e : sorted)
    if (e.is_loop()) return false;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

}  // namespace hypercouple

#include <doctest.h>

#include <sstream>

#include "hypercouple/core.hpp"
#include "hypercouple/edge_list.hpp"
#include "hypercouple/error.hpp"
#include "hypercouple/rng.hpp"
#include "hypercouple/stats.hpp"

using namespace hypercouple;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("params validation") {
  const auto p = Params::make(6, 3, 2);
  CHECK(p.M == 4);
  CHECK(p.max_degree() == 10);
  CHECK(p.total_edges() == 20);
  CHECK_FALSE(p.is_complete());
  CHECK(Params::make(5, 3, 6).is_complete());
  CHECK(code_of([] { Params::make(5, 3, 2); }) == ErrorCode::kDomain);   // 3 does not divide 10
  CHECK(code_of([] { Params::make(5, 3, 7); }) == ErrorCode::kDomain);   // above binom(4,2)
  CHECK(code_of([] { Params::make(2, 3, 1); }) == ErrorCode::kDomain);
  CHECK(code_of([] { Params::make(6, 1, 1); }) == ErrorCode::kDomain);
  CHECK(code_of([] { Params::make(6, 3, 0); }) == ErrorCode::kDomain);
}

TEST_CASE("edges are sorted sets") {
  const Edge e{3, 1, 2};
  CHECK(e[0] == 1);
  CHECK(e[2] == 3);
  CHECK(e.to_string() == "{1,2,3}");
  CHECK(e == Edge{1, 2, 3});
  CHECK(Edge{1, 2, 3} < Edge{1, 2, 4});
  CHECK(code_of([] { Edge{1, 1, 2}; }) == ErrorCode::kDomain);
  const auto loop = MultiEdge::from(std::vector<Vertex>{2, 1, 1});
  CHECK(loop.is_loop());
  CHECK(code_of([&] { (void)loop.to_edge(); }) == ErrorCode::kDomain);
}

TEST_CASE("colex ranks are a bijection onto [0, binom(n,k))") {
  std::vector<std::uint64_t> ranks;
  for_each_k_subset(7, 3, [&](const Edge& e) {
    ranks.push_back(colex_rank(e));
    CHECK(colex_unrank(colex_rank(e), 3) == e);
  });
  std::sort(ranks.begin(), ranks.end());
  for (std::size_t i = 0; i < ranks.size(); ++i) CHECK(ranks[i] == i);
}

TEST_CASE("degree") {
  const auto K5 = complete_hypergraph(5, 3);
  for (Vertex v = 1; v <= 5; ++v) CHECK(degree(K5, v) == 6);
  const Hypergraph empty(5, 3);
  CHECK(degree(empty, 4) == 0);
  const std::vector<Edge> es{{1, 2, 3}, {1, 4, 5}};
  const Hypergraph H(5, 3, es);
  CHECK(degree(H, 1) == 2);
  CHECK(code_of([&] { degree(H, 6); }) == ErrorCode::kDomain);
  CHECK(code_of([&] { degree(H, 0); }) == ErrorCode::kDomain);
}

TEST_CASE("pair degree") {
  CHECK(pair_degree(complete_hypergraph(5, 3), 1, 2) == 3);
  CHECK(pair_degree(Hypergraph(5, 3), 1, 2) == 0);
  const std::vector<Edge> es{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}};
  const Hypergraph H(4, 3, es);
  CHECK(pair_degree(H, 1, 2) == 2);
  CHECK(code_of([&] { pair_degree(H, 2, 2); }) == ErrorCode::kDomain);
}

TEST_CASE("relative codegree is asymmetric") {
  const std::vector<Edge> es{{1, 3, 4}, {2, 3, 4}};
  const Hypergraph H(4, 3, es);
  CHECK(codegree_rel(H, Hypergraph(4, 3), 1, 2) == 1);
  CHECK(codegree_rel(H, H, 1, 2) == 0);
  CHECK(codegree_rel(H, H, 2, 1) == 0);
  const std::vector<Edge> gs{{2, 3, 4}};
  const Hypergraph G(4, 3, gs);
  CHECK(codegree_rel(H, G, 1, 2) == 0);
  CHECK(codegree_rel(H, G, 2, 1) == 1);
  const std::vector<Edge> other{{1, 2, 3}};
  CHECK(code_of([&] { codegree_rel(H, Hypergraph(4, 3, other), 1, 2); }) == ErrorCode::kDomain);
}

TEST_CASE("residual state") {
  const auto p = Params::make(6, 3, 2);
  const OrderedHypergraph empty(6, 3);
  auto s = residual_state(empty, p);
  CHECK(s.t == 0);
  CHECK(s.tau == 1.0);
  for (Vertex v = 1; v <= 6; ++v) CHECK(s.r(v) == 2);

  const std::vector<Edge> one{{1, 2, 3}};
  s = residual_state(OrderedHypergraph(6, 3, one), p);
  CHECK(s.tau == doctest::Approx(0.75));
  const std::vector<int> expected{1, 1, 1, 2, 2, 2};
  for (Vertex v = 1; v <= 6; ++v) CHECK(s.r(v) == expected[static_cast<std::size_t>(v - 1)]);
  CHECK(s.total() == 9);

  const std::vector<Edge> full{{1, 2, 3}, {4, 5, 6}, {1, 2, 4}, {3, 5, 6}};
  s = residual_state(OrderedHypergraph(6, 3, full), p);
  CHECK(s.t == 4);
  CHECK(s.tau == 0.0);
  for (Vertex v = 1; v <= 6; ++v) CHECK(s.r(v) == 0);

  const std::vector<Edge> over{{1, 2, 3}, {1, 4, 5}, {1, 5, 6}};
  CHECK(code_of([&] { residual_state(OrderedHypergraph(6, 3, over), p); }) == ErrorCode::kInadmissible);
}

TEST_CASE("complement edges") {
  CHECK(complement_edges(complete_hypergraph(5, 3)).empty());
  CHECK(complement_edges(Hypergraph(4, 2)).size() == 6);
  const std::vector<Edge> g{{1, 2, 3}};
  const auto c = complement_edges(Hypergraph(4, 3, g));
  REQUIRE(c.size() == 3);
  CHECK(c[0] == Edge{1, 2, 4});
  CHECK(c[1] == Edge{1, 3, 4});
  CHECK(c[2] == Edge{2, 3, 4});
}

TEST_CASE("simplicity of multi-edge sequences") {
  auto me = [](std::vector<Vertex> v) { return MultiEdge::from(v); };
  std::vector<MultiEdge> a{me({1, 2, 3}), me({4, 5, 6})};
  CHECK(is_simple(a));
  std::vector<MultiEdge> b{me({1, 1, 2}), me({3, 4, 5})};
  CHECK_FALSE(is_simple(b));
  std::vector<MultiEdge> c{me({1, 2, 3}), me({3, 2, 1})};
  CHECK_FALSE(is_simple(c));
}

TEST_CASE("ordered hypergraph keeps insertion order and rejects repeats") {
  OrderedHypergraph G(5, 3);
  G.push_back(Edge{3, 4, 5});
  G.push_back(Edge{1, 2, 3});
  CHECK(G[0] == Edge{3, 4, 5});
  CHECK(G.prefix(1).size() == 1);
  CHECK(code_of([&] { G.push_back(Edge{1, 2, 3}); }) == ErrorCode::kDomain);
  CHECK(code_of([&] { G.push_back(Edge{1, 2, 6}); }) == ErrorCode::kDomain);
  G.pop_back();
  CHECK_FALSE(G.contains(Edge{1, 2, 3}));
}

TEST_CASE("edge list round trip") {
  const std::vector<Edge> es{{4, 5, 6}, {1, 2, 3}};
  const OrderedHypergraph G(6, 3, es);
  const auto text = to_edge_list(G, 1);
  CHECK(text == "# n=6 k=3 d=1\n4 5 6\n1 2 3\n");
  const auto doc = parse_edge_list(text);
  CHECK(doc.graph == G);
  REQUIRE(doc.d.has_value());
  CHECK(*doc.d == 1);
  CHECK(code_of([] { parse_edge_list("# n=6 k=3\n1 2\n"); }) == ErrorCode::kIo);
  CHECK(code_of([] { parse_edge_list("1 2 3\n"); }) == ErrorCode::kIo);
  std::istringstream two(text + to_edge_list(OrderedHypergraph(6, 3)));
  CHECK(read_edge_list_stream(two).size() == 2);
}

TEST_CASE("rng streams are reproducible and independent") {
  Rng a(RngStream{7, 1});
  Rng b(RngStream{7, 1});
  Rng c(RngStream{7, 2});
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
  }
  CHECK(differs);
  CHECK(RngStream{7, 1}.substream(3).seed == RngStream{7, 1}.substream(3).seed);
  Rng r(RngStream{1, 0});
  std::vector<int> hist(5, 0);
  for (int i = 0; i < 50000; ++i) {
    const auto x = r.below(5);
    REQUIRE(x < 5);
    ++hist[x];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 400);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("statistics helpers") {
  const auto ci = wilson_interval(50, 100);
  CHECK(ci.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(ci.hi == doctest::Approx(0.5962).epsilon(1e-3));
  CHECK(wilson_interval(0, 10).lo == 0.0);
  const std::vector<double> p{0.5, 0.5}, q{1.0, 0.0};
  CHECK(total_variation(p, q) == doctest::Approx(0.5));
  const std::vector<std::uint64_t> obs{250, 250, 250, 250};
  const std::vector<double> unif(4, 0.25);
  CHECK(chi_square_gof(obs, unif).p_value == doctest::Approx(1.0));
  const std::vector<std::uint64_t> skewed{400, 200, 200, 200};
  CHECK(chi_square_gof(skewed, unif).p_value < 1e-6);
  const std::vector<double> zero{0.5, 0.5, 0.0, 0.0};
  CHECK(chi_square_gof(obs, zero).impossible_observations == 500);
  CHECK(binomial_pmf(4, 0.5, 2) == doctest::Approx(0.375));
  const std::vector<double> xs{1, 2, 3, 4};
  const auto m = moments(xs);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
}

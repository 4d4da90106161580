#include <doctest.h>

#include <set>

#include "hypercouple/completion_table.hpp"
#include "hypercouple/error.hpp"
#include "hypercouple/exact_enum.hpp"
#include "oracles.hpp"

using namespace hypercouple;

namespace {

OrderedHypergraph graph(int n, int k, std::vector<Edge> edges) { return OrderedHypergraph(n, k, edges); }

}  // namespace

TEST_CASE("completion counts") {
  auto f = count_extensions(OrderedHypergraph(4, 2), Params::make(4, 2, 1));
  CHECK(f.unordered_count == 3);
  CHECK(f.ordered_count == 6);
  CHECK(f.admissible);

  f = count_extensions(OrderedHypergraph(2, 2), Params::make(2, 2, 1));
  CHECK(f.unordered_count == 1);
  // d = 2 exceeds binom(1,1): the only multigraph doubles the edge
  CHECK_THROWS_AS(Params::make(2, 2, 2), Error);
  f = count_extensions(OrderedHypergraph(2, 2), Params::make_relaxed(2, 2, 2));
  CHECK(f.ordered_count == 0);
  CHECK_FALSE(f.admissible);

  f = count_extensions(OrderedHypergraph(6, 3), Params::make(6, 3, 2));
  CHECK(f.unordered_count == 75);
  CHECK(f.ordered_count == 1800);
}

TEST_CASE("completion counts agree with subset enumeration") {
  struct Case {
    int n, k, d;
    std::vector<Edge> base;
  };
  const std::vector<Case> cases = {
      {6, 3, 2, {}},
      {6, 3, 2, {{1, 2, 3}}},
      {6, 3, 2, {{1, 2, 3}, {1, 4, 5}}},
      {6, 3, 2, {{1, 2, 3}, {4, 5, 6}}},
      {6, 2, 2, {}},
      {6, 2, 3, {{1, 2}}},
      {5, 2, 2, {{1, 2}, {3, 4}}},
      {7, 3, 3, {{1, 2, 3}, {4, 5, 6}, {1, 4, 7}}},
      {8, 4, 2, {}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.n);
    CAPTURE(c.k);
    CAPTURE(c.d);
    const auto params = Params::make(c.n, c.k, c.d);
    const auto G = graph(c.n, c.k, c.base);
    const auto fam = count_extensions(G, params, true);
    const auto ref = oracle::regular_completions(c.n, c.k, c.d, c.base);
    CHECK(fam.unordered_count == static_cast<long>(ref.size()));
    CHECK(fam.ordered_count == static_cast<long>(ref.size()) * oracle::factorial(static_cast<unsigned long>(params.M - G.size())));
    std::set<std::vector<Edge>> a(fam.completions.begin(), fam.completions.end());
    std::set<std::vector<Edge>> b(ref.begin(), ref.end());
    CHECK(a == b);
    std::uint64_t visited = 0;
    for_each_completion(G, params, [&](std::span<const Edge>) { ++visited; });
    CHECK(visited == ref.size());
    // the completion table counts the same family
    const auto table = CompletionTable::build(G, params);
    CHECK(table.count() == fam.unordered_count);
  }
}

TEST_CASE("completion table samples uniformly") {
  const auto params = Params::make(6, 3, 2);
  const auto table = CompletionTable::build(OrderedHypergraph(6, 3), params);
  std::map<std::vector<Edge>, int> hist;
  Rng rng(RngStream{3, 0});
  const int N = 75 * 400;
  for (int i = 0; i < N; ++i) ++hist[table.sample(rng)];
  CHECK(hist.size() == 75);
  for (const auto& [_, c] : hist) CHECK(std::abs(c - 400) < 5 * 20);
  CHECK(table.sample_ordered(rng).size() == 4);
}

TEST_CASE("inadmissible prefixes") {
  const auto params = Params::make(6, 3, 2);
  const auto G = graph(6, 3, {{1, 2, 3}, {1, 2, 4}});
  // vertices 1 and 2 are saturated; 3 and 4 need a second edge avoiding both
  const auto fam = count_extensions(G, params);
  CHECK(fam.unordered_count == static_cast<long>(oracle::regular_completions(6, 3, 2, G.edges()).size()));
  const auto bad = graph(6, 3, {{1, 2, 3}, {1, 4, 5}});
  const auto over = appended(bad, Edge{1, 2, 6});
  const auto f2 = count_extensions(over, params);
  CHECK_FALSE(f2.degree_feasible);
  CHECK(f2.ordered_count == 0);
  CHECK_THROWS_AS(exact_next_edge_distribution(over, params), Error);
}

TEST_CASE("node budget is a hard error, not a truncation") {
  WorkBound tiny;
  tiny.max_nodes = 10;
  try {
    count_extensions(OrderedHypergraph(6, 3), Params::make(6, 3, 2), false, tiny);
    FAIL("expected kTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooLarge);
  }
}

TEST_CASE("next-edge law") {
  const auto params = Params::make(6, 3, 2);
  SUBCASE("t = 0 is uniform") {
    const auto dist = exact_next_edge_distribution(OrderedHypergraph(6, 3), params);
    CHECK(dist.edges.size() == 20);
    for (const auto& p : dist.probability) CHECK(p == mpq_class(1, 20));
    CHECK(dist.min_ratio() == 1);
  }
  SUBCASE("G = {123} matches the subset oracle") {
    const auto G = graph(6, 3, {{1, 2, 3}});
    const auto dist = exact_next_edge_distribution(G, params);
    const auto ref = oracle::next_edge_law(6, 3, 2, G.edges());
    mpq_class sum = 0;
    std::set<mpq_class> values;
    for (std::size_t i = 0; i < dist.edges.size(); ++i) {
      CHECK(dist.probability[i] == ref.at(dist.edges[i]));
      sum += dist.probability[i];
      values.insert(dist.probability[i]);
    }
    CHECK(sum == 1);
    CHECK(values == std::set<mpq_class>{mpq_class(1, 45), mpq_class(1, 15), mpq_class(1, 5)});
    CHECK(dist.min_ratio() == mpq_class(19, 45));
    CHECK(dist.max_ratio() == mpq_class(19, 5));
  }
  SUBCASE("complete target is uniform on the complement") {
    const auto full = Params::make(5, 3, 6);
    const auto G = graph(5, 3, {{1, 2, 3}, {2, 4, 5}});
    const auto dist = exact_next_edge_distribution(G, full);
    for (const auto& p : dist.probability) CHECK(p == mpq_class(1, 8));
  }
  SUBCASE("t = M is a domain error") {
    const auto G = graph(6, 3, {{1, 2, 3}, {4, 5, 6}, {1, 2, 4}, {3, 5, 6}});
    try {
      exact_next_edge_distribution(G, params);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDomain);
    }
  }
}

TEST_CASE("min-ratio table over all admissible states at (6,3,2)") {
  const auto params = Params::make(6, 3, 2);
  const auto comps = oracle::regular_completions(6, 3, 2, {});
  // expected (min, max) of min_e p(e|G)(binom(n,k) - t) per t
  const std::vector<std::pair<mpq_class, mpq_class>> expected = {
      {1, 1}, {mpq_class(19, 45), mpq_class(19, 45)}, {0, 1}, {0, 0}};
  for (int t = 0; t < params.M; ++t) {
    std::set<std::vector<Edge>> states;
    for (const auto& c : comps)
      oracle::combinations(static_cast<int>(c.size()), t, [&](const std::vector<int>& idx) {
        std::vector<Edge> s;
        for (int i : idx) s.push_back(c[static_cast<std::size_t>(i)]);
        states.insert(s);
      });
    mpq_class lo = 1000, hi = -1;
    for (const auto& s : states) {
      const auto r = exact_next_edge_distribution(graph(6, 3, s), params).min_ratio();
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CAPTURE(t);
    CHECK(lo == expected[static_cast<std::size_t>(t)].first);
    CHECK(hi == expected[static_cast<std::size_t>(t)].second);
  }
}

TEST_CASE("switching class sizes") {
  SUBCASE("perfect matchings of K_4") {
    const auto cs = switching_class_sizes(OrderedHypergraph(4, 2), 1, 2, SwitchStatistic::kPairDegree,
                                          Params::make(4, 2, 1));
    CHECK(cs.sizes.at(0) == 4);
    CHECK(cs.sizes.at(1) == 2);
    CHECK(cs.total() == 6);
    CHECK(cs.is_interval());
  }
  SUBCASE("(6,3,2), G empty, (1,2)") {
    const auto params = Params::make(6, 3, 2);
    const auto pair = switching_class_sizes(OrderedHypergraph(6, 3), 1, 2, SwitchStatistic::kPairDegree, params);
    CHECK(pair.sizes == std::map<int, mpz_class>{{0, 504}, {1, 1152}, {2, 144}});
    CHECK(pair.is_interval());
    const auto codeg = switching_class_sizes(OrderedHypergraph(6, 3), 1, 2, SwitchStatistic::kCodegree, params);
    CHECK(codeg.sizes == std::map<int, mpz_class>{{0, 1728}, {2, 72}});
    CHECK(codeg.L == 2);
    CHECK_FALSE(codeg.is_interval());
  }
  SUBCASE("agree with the definition on enumerated completions") {
    const auto params = Params::make(6, 3, 2);
    const std::vector<Edge> base{{1, 2, 3}};
    const auto G = graph(6, 3, base);
    for (auto [u, v] : std::vector<std::pair<int, int>>{{1, 4}, {4, 1}, {4, 5}}) {
      std::map<int, mpz_class> pair_ref, cod_ref;
      for (auto c : oracle::regular_completions(6, 3, 2, base)) {
        auto H = c;
        H.insert(H.end(), base.begin(), base.end());
        pair_ref[oracle::pair_deg(c, u, v)] += oracle::factorial(3);
        cod_ref[oracle::cod(H, base, u, v)] += oracle::factorial(3);
      }
      CHECK(switching_class_sizes(G, u, v, SwitchStatistic::kPairDegree, params).sizes == pair_ref);
      CHECK(switching_class_sizes(G, u, v, SwitchStatistic::kCodegree, params).sizes == cod_ref);
    }
  }
}

TEST_CASE("configuration permutations") {
  const auto params = Params::make(6, 3, 2);
  const auto G = graph(6, 3, {{1, 2, 3}, {1, 4, 5}});
  const auto pc = count_simple_permutations(G, params);
  const auto ref = oracle::simple_permutations(6, 3, 2, G.edges());
  CHECK(pc.simple == 216);
  CHECK(pc.total == 360);
  CHECK(pc.simple == static_cast<unsigned long>(ref.first));
  CHECK(pc.total == static_cast<unsigned long>(ref.second));
  CHECK(configuration_count(G, params) == 360);

  const auto k4 = count_simple_permutations(OrderedHypergraph(4, 2), Params::make(4, 2, 1));
  CHECK(k4.simple_probability() == 1);
  CHECK(k4.total == 24);

  // P(simple) N_G = |R_G| (k!)^{M-t} at (6,3,2), one edge placed
  const auto G1 = graph(6, 3, {{1, 2, 3}});
  const auto p1 = count_simple_permutations(G1, params);
  const auto fam = count_extensions(G1, params);
  CHECK(p1.simple == fam.ordered_count * 6 * 6 * 6);
}

TEST_CASE("ratio identity") {
  SUBCASE("e = f") {
    const auto G = graph(6, 3, {{1, 2, 3}});
    const auto r = verify_ratio_identity(G, Edge{1, 4, 5}, Edge{1, 4, 5}, Params::make(6, 3, 2));
    CHECK(r.equal);
    CHECK(r.lhs == 1);
  }
  SUBCASE("perfect matchings") {
    const auto r = verify_ratio_identity(OrderedHypergraph(4, 2), Edge{1, 2}, Edge{3, 4}, Params::make(4, 2, 1));
    CHECK(r.equal);
    CHECK(r.lhs == 1);
    CHECK(r.rhs == 1);
  }
  SUBCASE("all pairs at (6,3,2), G = {123}") {
    const auto params = Params::make(6, 3, 2);
    const auto G = graph(6, 3, {{1, 2, 3}});
    int checked = 0;
    for (const auto& e : complement_edges(G.as_set()))
      for (const auto& f : complement_edges(G.as_set())) {
        if (e == f || count_extensions(appended(G, f), params).ordered_count == 0) continue;
        const auto r = verify_ratio_identity(G, e, f, params);
        CHECK(r.equal);
        ++checked;
        if (checked > 60) break;
      }
    CHECK(checked > 20);
  }
}

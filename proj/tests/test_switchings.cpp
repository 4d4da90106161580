#include <doctest.h>

#include "hypercouple/error.hpp"
#include "hypercouple/samplers.hpp"
#include "hypercouple/switchings.hpp"
#include "oracles.hpp"

using namespace hypercouple;

namespace {

Hypergraph graph(int n, int k, std::vector<Edge> es) { return Hypergraph(n, k, es); }

}  // namespace

TEST_CASE("k = 2 switch swaps partners") {
  const auto H = graph(4, 2, {{1, 2}, {3, 4}});
  const auto move = SwitchingMove::from_rows({Edge{1, 2}, Edge{3, 4}});
  const auto added = move.added();
  REQUIRE(added.size() == 2);
  CHECK(added[0] == Edge{1, 3});
  CHECK(added[1] == Edge{2, 4});
  const auto H2 = apply_switch(H, move);
  CHECK(H2 == graph(4, 2, {{1, 3}, {2, 4}}));
  CHECK(apply_switch(H2, move.inverse()) == H);
}

TEST_CASE("illegal switches") {
  const auto H = graph(4, 2, {{1, 2}, {3, 4}, {1, 3}});
  const auto clash = SwitchingMove::from_rows({Edge{1, 2}, Edge{3, 4}});  // adds {1,3} again
  CHECK(switch_violation(H, clash).has_value());
  const auto missing = SwitchingMove::from_rows({Edge{1, 4}, Edge{2, 3}});
  CHECK(switch_violation(H, missing).has_value());
  try {
    apply_switch(H, missing);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIllegalSwitch);
  }
  const auto overlapping = SwitchingMove::from_rows({Edge{1, 2}, Edge{1, 3}});
  CHECK(switch_violation(H, overlapping).has_value());
}

TEST_CASE("switches preserve degrees and invert") {
  Rng rng(RngStream{11, 0});
  const auto params = Params::make(8, 3, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto R = sample_regular(OrderedHypergraph(8, 3), params, rng).as_set();
    const auto edges = R.sorted_edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = 0; j < edges.size(); ++j)
        for (std::size_t l = 0; l < edges.size(); ++l) {
          if (i == j || j == l || i == l) continue;
          const auto move = SwitchingMove::from_rows({edges[i], edges[j], edges[l]});
          if (switch_violation(R, move)) continue;
          const auto R2 = apply_switch(R, move);
          CHECK(R2.degrees() == R.degrees());
          CHECK(apply_switch(R2, move.inverse()) == R);
        }
  }
}

TEST_CASE("forward counts on small instances") {
  const Hypergraph G(4, 2);
  SUBCASE("two disjoint edges give one move") {
    const auto H = graph(4, 2, {{1, 2}, {3, 4}});
    SwitchTarget target{SwitchKind::kRemoveEdge, Edge{1, 2}};
    CHECK(forward_count(H, G, target) == 1);
  }
  SUBCASE("no disjoint partner gives zero") {
    const auto H = graph(4, 2, {{1, 2}, {1, 3}, {2, 3}});
    SwitchTarget target{SwitchKind::kRemoveEdge, Edge{1, 2}};
    CHECK(forward_count(H, G, target) == 0);
  }
}

TEST_CASE("forward and backward counts agree with the image sets") {
  Rng rng(RngStream{12, 0});
  const auto params = Params::make(9, 3, 2);
  const OrderedHypergraph G0(9, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto R = sample_regular(G0, params, rng).as_set();
    const auto e = R.sorted_edges()[0];
    SwitchTarget target{SwitchKind::kRemoveEdge, e};
    const auto images = forward_images(R, G0.as_set(), target);
    CHECK(images.size() == forward_count(R, G0.as_set(), target));
    for (const auto& H2 : images) {
      CHECK_FALSE(H2.contains(e));
      CHECK(H2.degrees() == R.degrees());
      const auto back = backward_preimages(H2, G0.as_set(), target);
      CHECK(std::find(back.begin(), back.end(), R) != back.end());
    }
  }
}

TEST_CASE("double counting at (6,3,2)") {
  const auto params = Params::make(6, 3, 2);
  const OrderedHypergraph empty(6, 3);
  SUBCASE("remove an edge") {
    const auto r = double_counting(empty, params, SwitchTarget{SwitchKind::kRemoveEdge, Edge{1, 2, 3}});
    CHECK(r.identity_ok);
    CHECK(r.sandwich_ok);
    CHECK(r.images_in_target);
    CHECK(r.edges_forward == r.edges_backward);
    CHECK(r.source_size * r.min_f <= r.edges_forward);
    CHECK(r.edges_backward <= r.target_size * r.max_b);
    CHECK(r.source_size + r.target_size == 75);
    // oracle: completions containing {1,2,3}
    int with = 0;
    for (const auto& c : oracle::regular_completions(6, 3, 2, {}))
      with += std::find(c.begin(), c.end(), Edge{1, 2, 3}) != c.end();
    CHECK(r.source_size == static_cast<std::uint64_t>(with));
  }
  SUBCASE("pair degree classes") {
    SwitchTarget target{SwitchKind::kPairDegree, Edge{}, 1, 2};
    const auto reports = double_counting_all(empty, params, target);
    REQUIRE_FALSE(reports.empty());
    for (const auto& r : reports) {
      CAPTURE(r.ell);
      CHECK(r.identity_ok);
      CHECK(r.sandwich_ok);
      CHECK(r.images_in_target);
    }
  }
  SUBCASE("codegree classes") {
    SwitchTarget target{SwitchKind::kCodegree, Edge{}, 1, 2};
    for (const auto& r : double_counting_all(empty, params, target)) {
      CAPTURE(r.ell);
      CHECK(r.identity_ok);
      CHECK(r.sandwich_ok);
    }
  }
}

TEST_CASE("switch statistic matches the definitions") {
  Rng rng(RngStream{13, 0});
  const auto params = Params::make(7, 3, 3);
  const std::vector<Edge> gs{{1, 2, 3}};
  const OrderedHypergraph G(7, 3, gs);
  for (int trial = 0; trial < 50; ++trial) {
    const auto R = sample_regular(G, params, rng);
    const auto edges = R.as_set().sorted_edges();
    std::vector<Edge> diff;
    for (const auto& e : edges)
      if (!G.contains(e)) diff.push_back(e);
    for (Vertex u = 1; u <= 3; ++u)
      for (Vertex v = 4; v <= 5; ++v) {
        CHECK(switch_statistic(R.as_set(), G.as_set(), SwitchTarget{SwitchKind::kPairDegree, Edge{}, u, v}) ==
              oracle::pair_deg(diff, u, v));
        CHECK(switch_statistic(R.as_set(), G.as_set(), SwitchTarget{SwitchKind::kCodegree, Edge{}, u, v}) ==
              oracle::cod(edges, gs, u, v));
      }
  }
}

TEST_CASE("edge probability") {
  Rng rng(RngStream{14, 0});
  const auto k4 = edge_probability(OrderedHypergraph(4, 2), Edge{1, 2}, Params::make(4, 2, 1), 30000, rng);
  REQUIRE(k4.exact.has_value());
  CHECK(*k4.exact == doctest::Approx(1.0 / 3.0));
  CHECK(k4.ci.contains(1.0 / 3.0));

  const auto full = edge_probability(OrderedHypergraph(5, 3), Edge{1, 2, 3}, Params::make(5, 3, 6), 100, rng);
  CHECK(full.estimate == 1.0);

  const auto mid = edge_probability(OrderedHypergraph(6, 3), Edge{1, 2, 3}, Params::make(6, 3, 2), 20000, rng);
  REQUIRE(mid.exact.has_value());
  CHECK(mid.ci.contains(*mid.exact));
  CHECK(mid.empirical_C0 > 0.0);
}

TEST_CASE("tail profile") {
  Rng rng(RngStream{15, 0});
  const auto params = Params::make(6, 3, 2);
  for (auto statistic : {SwitchStatistic::kPairDegree, SwitchStatistic::kCodegree}) {
    const auto tp = tail_profile(OrderedHypergraph(6, 3), 1, 2, statistic, params, 5000, rng);
    CHECK(tp.monotone);
    REQUIRE_FALSE(tp.empirical_tail.empty());
    CHECK(tp.empirical_tail.rbegin()->second == 0.0);
    double prev = 1.0;
    for (const auto& [l, p] : tp.empirical_tail) {
      CHECK(p <= prev);
      prev = p;
    }
    REQUIRE_FALSE(tp.exact_tail.empty());
    CHECK(tp.exact_tail.rbegin()->second == doctest::Approx(0.0));
  }
  // pair degree classes at (6,3,2) are 504, 1152, 144: the ratio rises, then drops
  const auto tp = tail_profile(OrderedHypergraph(6, 3), 1, 2, SwitchStatistic::kPairDegree, params, 100, rng);
  REQUIRE(tp.class_ratios.size() == 2);
  CHECK(tp.class_ratios.at(1) == doctest::Approx(1152.0 / 504.0));
  CHECK(tp.class_ratios.at(2) == doctest::Approx(144.0 / 1152.0));
}

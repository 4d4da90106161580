#include "hypercouple/exact_enum.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace hypercouple {

WorkBound WorkBound::from_env() {
  WorkBound bound;
  if (const char* env = std::getenv("HYPERCOUPLE_NODE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) bound.max_nodes = value;
  }
  return bound;
}

mpz_class factorial(unsigned long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

OrderedHypergraph appended(const OrderedHypergraph& G, const Edge& e) {
  OrderedHypergraph out = G;
  out.push_back(e);
  return out;
}

namespace {

void check_shape(const OrderedHypergraph& G, const Params& params) {
  require(G.n() == params.n && G.k() == params.k, ErrorCode::kDomain, "graph does not match params");
}

/// Residual degrees, or nullopt-like empty vector when some degree exceeds d.
std::vector<int> residuals_or_empty(const OrderedHypergraph& G, const Params& params) {
  if (static_cast<int>(G.size()) > params.M) return {};
  std::vector<int> r(static_cast<std::size_t>(params.n) + 1, 0);
  for (Vertex v = 1; v <= params.n; ++v) {
    r[static_cast<std::size_t>(v)] = params.d - G.degree(v);
    if (r[static_cast<std::size_t>(v)] < 0) return {};
  }
  return r;
}

// Canonical backtracking: the smallest vertex with positive residual must be
// covered by an edge whose least vertex it is; such edges are tried in
// increasing lexicographic order, so every completion set is produced once.
class CompletionSearch {
 public:
  struct Candidate {
    Edge edge;
    std::size_t index;  // position in the lexicographic complement of G
  };

  CompletionSearch(const OrderedHypergraph& G, const Params& params, std::vector<int> residual,
                   WorkBound bound)
      : n_(params.n), residual_(std::move(residual)), bound_(bound), by_min_(static_cast<std::size_t>(params.n) + 1) {
    std::size_t index = 0;
    for_each_complement_edge(G.as_set(), [&](const Edge& e) {
      by_min_[static_cast<std::size_t>(e[0])].push_back({e, index});
      ++index;
    });
    complement_size_ = index;
  }

  std::size_t complement_size() const { return complement_size_; }
  std::uint64_t nodes() const { return nodes_; }

  template <class Leaf>
  void run(Leaf&& leaf) {
    descend(1, 0, leaf);
  }

  const std::vector<const Candidate*>& chosen() const { return chosen_; }

 private:
  template <class Leaf>
  void descend(Vertex from, std::size_t next, Leaf& leaf) {
    if (++nodes_ > bound_.max_nodes)
      fail(ErrorCode::kTooLarge, "exact enumeration exceeded the node budget of " +
                                     std::to_string(bound_.max_nodes));
    Vertex v = from;
    while (v <= n_ && residual_[static_cast<std::size_t>(v)] == 0) {
      ++v;
      next = 0;
    }
    if (v > n_) {
      leaf();
      return;
    }
    const auto& cands = by_min_[static_cast<std::size_t>(v)];
    for (std::size_t i = next; i < cands.size(); ++i) {
      if (static_cast<std::size_t>(residual_[static_cast<std::size_t>(v)]) > cands.size() - i) break;
      const Edge& e = cands[i].edge;
      bool fits = true;
      for (Vertex w : e)
        if (residual_[static_cast<std::size_t>(w)] == 0) {
          fits = false;
          break;
        }
      if (!fits) continue;
      for (Vertex w : e) --residual_[static_cast<std::size_t>(w)];
      chosen_.push_back(&cands[i]);
      descend(v, i + 1, leaf);
      chosen_.pop_back();
      for (Vertex w : e) ++residual_[static_cast<std::size_t>(w)];
    }
  }

  int n_;
  std::vector<int> residual_;
  WorkBound bound_;
  std::vector<std::vector<Candidate>> by_min_;
  std::vector<const Candidate*> chosen_;
  std::size_t complement_size_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::uint64_t for_each_completion(const OrderedHypergraph& G, const Params& params,
                                  const std::function<void(std::span<const Edge>)>& visit,
                                  WorkBound bound) {
  check_shape(G, params);
  auto residual = residuals_or_empty(G, params);
  if (residual.empty()) return 0;
  CompletionSearch search(G, params, std::move(residual), bound);
  std::vector<Edge> buffer;
  search.run([&] {
    buffer.clear();
    for (const auto* c : search.chosen()) buffer.push_back(c->edge);
    std::sort(buffer.begin(), buffer.end());
    visit(buffer);
  });
  return search.nodes();
}

ExtensionFamily count_extensions(const OrderedHypergraph& G, const Params& params, bool list,
                                 WorkBound bound) {
  check_shape(G, params);
  ExtensionFamily family;
  family.base = G;
  family.params = params;
  family.listed = list;
  auto residual = residuals_or_empty(G, params);
  if (residual.empty()) {
    family.degree_feasible = false;
    return family;
  }
  CompletionSearch search(G, params, std::move(residual), bound);
  std::uint64_t count = 0;
  search.run([&] {
    ++count;
    if (list) {
      std::vector<Edge> set;
      for (const auto* c : search.chosen()) set.push_back(c->edge);
      std::sort(set.begin(), set.end());
      family.completions.push_back(std::move(set));
    }
  });
  family.nodes = search.nodes();
  family.unordered_count = static_cast<unsigned long>(count);
  family.ordered_count =
      family.unordered_count * factorial(static_cast<unsigned long>(params.M - static_cast<int>(G.size())));
  family.admissible = count > 0;
  if (list) std::sort(family.completions.begin(), family.completions.end());
  return family;
}

// ---------------------------------------------------------------- next-edge law

mpq_class NextEdgeDistribution::min_ratio() const {
  mpq_class best = probability.empty() ? mpq_class(0) : probability.front();
  for (const auto& p : probability) best = std::min(best, p);
  return best * mpq_class(static_cast<unsigned long>(complement_size));
}

mpq_class NextEdgeDistribution::max_ratio() const {
  mpq_class best = 0;
  for (const auto& p : probability) best = std::max(best, p);
  return best * mpq_class(static_cast<unsigned long>(complement_size));
}

std::vector<double> NextEdgeDistribution::probabilities_as_double() const {
  std::vector<double> out;
  out.reserve(probability.size());
  for (const auto& p : probability) out.push_back(p.get_d());
  return out;
}

NextEdgeDistribution exact_next_edge_distribution(const OrderedHypergraph& G, const Params& params,
                                                  WorkBound bound) {
  check_shape(G, params);
  const int t = static_cast<int>(G.size());
  require(t < params.M, ErrorCode::kDomain, "no next edge: the prefix already has M edges");
  auto residual = residuals_or_empty(G, params);
  require(!residual.empty(), ErrorCode::kInadmissible, "prefix has a vertex of degree above d");

  CompletionSearch search(G, params, std::move(residual), bound);
  std::vector<std::uint64_t> tally(search.complement_size(), 0);
  std::uint64_t total = 0;
  search.run([&] {
    ++total;
    for (const auto* c : search.chosen()) ++tally[c->index];
  });
  require(total > 0, ErrorCode::kInadmissible, "prefix has no d-regular completion");

  NextEdgeDistribution dist;
  dist.t = t;
  dist.complement_size = search.complement_size();
  dist.edges = complement_edges(G.as_set());
  dist.completions = static_cast<unsigned long>(total);
  const int remaining = params.M - t;
  dist.completions_with.reserve(tally.size());
  dist.probability.reserve(tally.size());
  for (auto c : tally) {
    dist.completions_with.emplace_back(static_cast<unsigned long>(c));
    // |R_{G+e}| / |R_G| = U(G+e) (M-t-1)! / (U(G) (M-t)!)
    mpq_class p(mpz_class(static_cast<unsigned long>(c)),
                mpz_class(static_cast<unsigned long>(total)) * remaining);
    p.canonicalize();
    dist.probability.push_back(p);
  }
  return dist;
}

// ---------------------------------------------------------------- switching classes

mpz_class SwitchingClassSizes::total() const {
  mpz_class sum = 0;
  for (const auto& [_, size] : sizes) sum += size;
  return sum;
}

bool SwitchingClassSizes::is_interval() const {
  int expected = 0;
  for (const auto& [value, size] : sizes) {
    if (size == 0) continue;
    if (value != expected) return false;
    ++expected;
  }
  return true;
}

SwitchingClassSizes switching_class_sizes(const OrderedHypergraph& G, Vertex u, Vertex v,
                                          SwitchStatistic statistic, const Params& params,
                                          WorkBound bound) {
  check_shape(G, params);
  require(u != v && u >= 1 && v >= 1 && u <= params.n && v <= params.n, ErrorCode::kDomain,
          "need distinct vertices u, v in [1, n]");
  std::map<int, std::uint64_t> counts;
  const Hypergraph& base = G.as_set();
  for_each_completion(
      G, params,
      [&](std::span<const Edge> completion) {
        int value = 0;
        if (statistic == SwitchStatistic::kPairDegree) {
          for (const auto& e : completion)
            if (e.contains(u) && e.contains(v)) ++value;
        } else {
          Hypergraph H = base;
          for (const auto& e : completion) H.add(e);
          value = codegree_rel(H, base, u, v);
        }
        ++counts[value];
      },
      bound);
  SwitchingClassSizes out;
  out.statistic = statistic;
  const mpz_class scale = factorial(static_cast<unsigned long>(params.M - static_cast<int>(G.size())));
  for (const auto& [value, c] : counts) {
    out.sizes[value] = mpz_class(static_cast<unsigned long>(c)) * scale;
    out.L = std::max(out.L, value);
  }
  return out;
}

// ---------------------------------------------------------------- configuration model

mpq_class PermutationCount::simple_probability() const {
  if (total == 0) return 0;
  mpq_class p(simple, total);
  p.canonicalize();
  return p;
}

mpz_class configuration_count(const OrderedHypergraph& G, const Params& params) {
  check_shape(G, params);
  const auto state = residual_state(G, params);
  mpz_class out = factorial(static_cast<unsigned long>(params.k) *
                            static_cast<unsigned long>(params.M - state.t));
  for (Vertex v = 1; v <= params.n; ++v) out /= factorial(static_cast<unsigned long>(state.r(v)));
  return out;
}

namespace {

// Walks the multiset permutations of the residual multiset position by
// position. A tuple that repeats a vertex, equals an edge of G, or equals an
// earlier tuple makes the whole subtree non-simple, so it is cut off there.
class PermutationWalk {
 public:
  PermutationWalk(const OrderedHypergraph& G, const Params& params, std::vector<int> mult, WorkBound bound)
      : G_(G.as_set()), k_(params.k), n_(params.n), length_(params.k * (params.M - static_cast<int>(G.size()))),
        mult_(std::move(mult)), bound_(bound), seq_(static_cast<std::size_t>(length_)) {}

  void run() { step(0); }
  std::uint64_t simple() const { return simple_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  void step(int pos) {
    if (++nodes_ > bound_.max_nodes)
      fail(ErrorCode::kTooLarge, "permutation enumeration exceeded the node budget of " +
                                     std::to_string(bound_.max_nodes));
    if (pos == length_) {
      ++simple_;
      return;
    }
    const int j = pos % k_;
    const auto start = seq_.begin() + (pos - j);
    for (Vertex w = 1; w <= n_; ++w) {
      int& m = mult_[static_cast<std::size_t>(w)];
      if (m == 0) continue;
      if (std::find(start, start + j, w) != start + j) continue;
      --m;
      seq_[static_cast<std::size_t>(pos)] = w;
      if (j == k_ - 1) {
        const Edge e = Edge::from(std::span<const Vertex>(&*start, static_cast<std::size_t>(k_)));
        const bool repeat = G_.contains(e) || std::find(used_.begin(), used_.end(), e) != used_.end();
        if (!repeat) {
          used_.push_back(e);
          step(pos + 1);
          used_.pop_back();
        }
      } else {
        step(pos + 1);
      }
      ++m;
    }
  }

  const Hypergraph& G_;
  int k_;
  int n_;
  int length_;
  std::vector<int> mult_;
  WorkBound bound_;
  std::vector<Vertex> seq_;  // the permutation so far
  std::vector<Edge> used_;
  std::uint64_t simple_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace

PermutationCount count_simple_permutations(const OrderedHypergraph& G, const Params& params,
                                           WorkBound bound) {
  check_shape(G, params);
  const auto state = residual_state(G, params);
  PermutationCount out;
  out.total = configuration_count(G, params);
  PermutationWalk walk(G, params, state.residual, bound);
  walk.run();
  out.simple = static_cast<unsigned long>(walk.simple());
  out.nodes = walk.nodes();
  return out;
}

// ---------------------------------------------------------------- ratio identity

RatioIdentityReport verify_ratio_identity(const OrderedHypergraph& G, const Edge& e, const Edge& f,
                                          const Params& params, WorkBound bound) {
  check_shape(G, params);
  G.as_set().check_edge(e);
  G.as_set().check_edge(f);
  require(!G.contains(e) && !G.contains(f), ErrorCode::kDomain, "e and f must lie outside G");
  const auto state = residual_state(G, params);
  require(state.t < params.M, ErrorCode::kDomain, "prefix already has M edges");

  RatioIdentityReport report;
  report.e = e;
  report.f = f;

  auto side = [&](const Edge& x, mpz_class& count, mpq_class& simple_p) {
    const auto Gx = appended(G, x);
    if (residuals_or_empty(Gx, params).empty()) {
      count = 0;
      simple_p = 0;
      return;
    }
    count = count_extensions(Gx, params, false, bound).ordered_count;
    simple_p = count_simple_permutations(Gx, params, bound).simple_probability();
  };
  side(e, report.count_e, report.simple_probability_e);
  side(f, report.count_f, report.simple_probability_f);
  require(report.count_f > 0, ErrorCode::kInadmissible, "G + f has no completion; the ratio is undefined");

  mpz_class num = 1;
  mpz_class den = 1;
  for (Vertex v : e)
    if (!f.contains(v)) num *= state.r(v);
  for (Vertex v : f)
    if (!e.contains(v)) den *= state.r(v);
  report.residual_ratio = mpq_class(num, den);
  report.residual_ratio.canonicalize();
  report.lhs = mpq_class(report.count_e, report.count_f);
  report.lhs.canonicalize();
  report.rhs = report.residual_ratio * report.simple_probability_e / report.simple_probability_f;
  report.equal = report.lhs == report.rhs;
  return report;
}

}  // namespace hypercouple

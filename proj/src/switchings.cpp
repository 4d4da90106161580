#include "hypercouple/switchings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hypercouple/samplers.hpp"

namespace hypercouple {

const char* to_string(SwitchKind kind) {
  switch (kind) {
    case SwitchKind::kRemoveEdge: return "remove-edge";
    case SwitchKind::kPairDegree: return "pair-degree";
    case SwitchKind::kCodegree: return "codegree";
  }
  return "?";
}

// ---------------------------------------------------------------- moves

std::vector<Edge> SwitchingMove::removed() const {
  std::vector<Edge> out;
  for (const auto& row : matrix) out.push_back(Edge::from(row));
  return out;
}

std::vector<Edge> SwitchingMove::added() const {
  std::vector<Edge> out;
  const std::size_t k = matrix.size();
  std::vector<Vertex> column(k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) column[i] = matrix[i][j];
    out.push_back(Edge::from(column));
  }
  return out;
}

SwitchingMove SwitchingMove::inverse() const {
  SwitchingMove t;
  const std::size_t k = matrix.size();
  t.matrix.assign(k, std::vector<Vertex>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) t.matrix[j][i] = matrix[i][j];
  return t;
}

SwitchingMove SwitchingMove::from_rows(const std::vector<Edge>& rows, std::optional<Vertex> lead) {
  SwitchingMove move;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<Vertex> row(rows[i].begin(), rows[i].end());
    if (i == 0 && lead) {
      auto it = std::find(row.begin(), row.end(), *lead);
      require(it != row.end(), ErrorCode::kIllegalSwitch, "lead vertex not in the first row");
      std::rotate(row.begin(), it, it + 1);
    }
    move.matrix.push_back(std::move(row));
  }
  return move;
}

std::optional<std::string> switch_violation(const Hypergraph& H, const SwitchingMove& move) {
  const std::size_t k = move.matrix.size();
  if (static_cast<int>(k) != H.k()) return "matrix is not k x k";
  std::vector<Vertex> all;
  for (const auto& row : move.matrix) {
    if (row.size() != k) return "matrix is not k x k";
    all.insert(all.end(), row.begin(), row.end());
  }
  for (Vertex x : all)
    if (x < 1 || x > H.n()) return "vertex out of range";
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) return "removed edges are not pairwise disjoint";
  for (const auto& e : move.removed())
    if (!H.contains(e)) return "removed edge " + e.to_string() + " is not in H";
  for (const auto& f : move.added())
    if (H.contains(f)) return "added edge " + f.to_string() + " would be a double edge";
  return std::nullopt;
}

Hypergraph apply_switch(const Hypergraph& H, const SwitchingMove& move) {
  if (auto why = switch_violation(H, move)) fail(ErrorCode::kIllegalSwitch, "illegal switch: " + *why);
  Hypergraph out = H;
  for (const auto& e : move.removed()) out.remove(e);
  for (const auto& f : move.added()) out.add(f);
  return out;
}

int switch_statistic(const Hypergraph& H, const Hypergraph& G, const SwitchTarget& target) {
  switch (target.kind) {
    case SwitchKind::kRemoveEdge: return H.contains(target.e) ? 1 : 0;
    case SwitchKind::kPairDegree: return pair_degree(H, target.u, target.v) - pair_degree(G, target.u, target.v);
    case SwitchKind::kCodegree: return codegree_rel(H, G, target.u, target.v);
  }
  return 0;
}

bool is_legal_move(const Hypergraph& H, const Hypergraph& G, const SwitchTarget& target,
                   const SwitchingMove& move) {
  if (switch_violation(H, move)) return false;
  const auto rows = move.removed();
  for (const auto& e : rows)
    if (G.contains(e)) return false;
  const std::size_t k = move.matrix.size();
  const auto& first = move.matrix[0];
  for (std::size_t i = 1; i < k; ++i)
    if (!std::is_sorted(move.matrix[i].begin(), move.matrix[i].end())) return false;

  switch (target.kind) {
    case SwitchKind::kRemoveEdge:
      if (!std::is_sorted(first.begin(), first.end()) || rows[0] != target.e) return false;
      break;
    case SwitchKind::kPairDegree:
      if (!std::is_sorted(first.begin(), first.end())) return false;
      if (!rows[0].contains(target.u) || !rows[0].contains(target.v)) return false;
      break;
    case SwitchKind::kCodegree: {
      if (first[0] != target.v || !std::is_sorted(first.begin() + 1, first.end())) return false;
      if (rows[0].contains(target.u)) return false;
      std::vector<Vertex> partner(first.begin() + 1, first.end());
      partner.push_back(target.u);
      if (!H.contains(Edge::from(partner))) return false;
      // (f_1 \ v) + u in H blocks the decrease.
      std::vector<Vertex> blocked;
      for (std::size_t i = 1; i < k; ++i) blocked.push_back(move.matrix[i][0]);
      if (std::find(blocked.begin(), blocked.end(), target.u) == blocked.end()) {
        blocked.push_back(target.u);
        if (H.contains(Edge::from(blocked))) return false;
      }
      break;
    }
  }
  Hypergraph image = H;
  for (const auto& e : rows) image.remove(e);
  for (const auto& f : move.added()) image.add(f);
  return switch_statistic(image, G, target) == switch_statistic(H, G, target) - 1;
}

// ---------------------------------------------------------------- enumeration

namespace {

std::uint64_t vertex_mask(const Edge& e) {
  std::uint64_t m = 0;
  for (Vertex v : e) m |= 1ULL << v;
  return m;
}

void check_mask_range(const Hypergraph& H) {
  require(H.n() <= 63, ErrorCode::kTooLarge, "switching enumeration supports n <= 63");
}

std::vector<Edge> free_edges(const Hypergraph& H, const Hypergraph& G) {
  std::vector<Edge> out;
  for (const auto& e : H.sorted_edges())
    if (!G.contains(e)) out.push_back(e);
  return out;
}

// Calls fn for every set of `count` pairwise disjoint pool edges avoiding `blocked`.
template <class Fn>
void disjoint_tuples(const std::vector<Edge>& pool, std::size_t from, std::uint64_t blocked, int count,
                     std::vector<Edge>& chosen, Fn& fn) {
  if (count == 0) {
    fn(chosen);
    return;
  }
  for (std::size_t i = from; i < pool.size(); ++i) {
    const std::uint64_t m = vertex_mask(pool[i]);
    if (m & blocked) continue;
    chosen.push_back(pool[i]);
    disjoint_tuples(pool, i + 1, blocked | m, count - 1, chosen, fn);
    chosen.pop_back();
  }
}

std::vector<Hypergraph> unique_graphs(std::set<std::vector<Edge>>& seen, int n, int k) {
  std::vector<Hypergraph> out;
  out.reserve(seen.size());
  for (const auto& edges : seen) out.emplace_back(n, k, edges);
  return out;
}

}  // namespace

std::vector<Hypergraph> forward_images(const Hypergraph& H, const Hypergraph& G, const SwitchTarget& target) {
  check_mask_range(H);
  const int k = H.k();
  const auto pool = free_edges(H, G);
  std::vector<Edge> firsts;
  switch (target.kind) {
    case SwitchKind::kRemoveEdge:
      require(H.contains(target.e) && !G.contains(target.e), ErrorCode::kDomain,
              "remove-edge switching needs e in H \\ G");
      firsts.push_back(target.e);
      break;
    case SwitchKind::kPairDegree:
      for (const auto& e : pool)
        if (e.contains(target.u) && e.contains(target.v)) firsts.push_back(e);
      break;
    case SwitchKind::kCodegree:
      for (const auto& e : pool)
        if (e.contains(target.v) && !e.contains(target.u)) firsts.push_back(e);
      break;
  }
  const std::optional<Vertex> lead =
      target.kind == SwitchKind::kCodegree ? std::optional<Vertex>(target.v) : std::nullopt;

  std::set<std::vector<Edge>> seen;
  std::vector<Edge> chosen;
  for (const auto& e1 : firsts) {
    auto visit = [&](const std::vector<Edge>& others) {
      std::vector<Edge> rows{e1};
      rows.insert(rows.end(), others.begin(), others.end());
      const auto move = SwitchingMove::from_rows(rows, lead);
      if (!is_legal_move(H, G, target, move)) return;
      seen.insert(apply_switch(H, move).sorted_edges());
    };
    disjoint_tuples(pool, 0, vertex_mask(e1), k - 1, chosen, visit);
  }
  return unique_graphs(seen, H.n(), k);
}

std::uint64_t forward_count(const Hypergraph& H, const Hypergraph& G, const SwitchTarget& target) {
  return forward_images(H, G, target).size();
}

std::vector<Hypergraph> backward_preimages(const Hypergraph& H2, const Hypergraph& G, const SwitchTarget& target) {
  check_mask_range(H2);
  const int k = H2.k();
  const auto ku = static_cast<std::size_t>(k);
  const auto pool = free_edges(H2, G);
  std::set<std::vector<Edge>> seen;
  std::vector<Edge> chosen;

  std::vector<std::vector<Vertex>> matrix(ku, std::vector<Vertex>(ku));
  std::vector<std::vector<std::size_t>> perm(ku, std::vector<std::size_t>(ku));

  auto try_matrix = [&](const std::vector<Edge>& columns) {
    // Each choice of the distinguished first row.
    for (std::size_t lead = 0; lead < ku; ++lead) {
      SwitchingMove move;
      move.matrix.push_back(matrix[lead]);
      for (std::size_t r = 0; r < ku; ++r)
        if (r != lead) move.matrix.push_back(matrix[r]);
      bool labeled = true;
      for (std::size_t r = 1; r < ku; ++r)
        if (!std::is_sorted(move.matrix[r].begin(), move.matrix[r].end())) labeled = false;
      const auto& top = move.matrix[0];
      if (target.kind == SwitchKind::kCodegree) {
        if (top[0] != target.v || !std::is_sorted(top.begin() + 1, top.end())) labeled = false;
      } else if (!std::is_sorted(top.begin(), top.end())) {
        labeled = false;
      }
      if (!labeled) continue;
      const auto rows = move.removed();
      bool fresh = true;
      for (const auto& e : rows)
        if (H2.contains(e)) fresh = false;
      if (!fresh) continue;
      Hypergraph H = H2;
      for (const auto& f : columns) H.remove(f);
      for (const auto& e : rows) H.add(e);
      if (!is_legal_move(H, G, target, move)) continue;
      if (apply_switch(H, move) != H2) fail(ErrorCode::kInternal, "reconstructed move does not reproduce H'");
      seen.insert(H.sorted_edges());
    }
  };

  auto visit = [&](const std::vector<Edge>& columns) {
    std::vector<std::size_t> order(ku);
    std::iota(order.begin(), order.end(), 0);
    do {
      // Column order fixed; row r takes vertex r of the first column, and
      // a permutation of each later column assigns its vertices to rows.
      for (std::size_t j = 0; j < ku; ++j) std::iota(perm[j].begin(), perm[j].end(), 0);
      std::function<void(std::size_t)> assign = [&](std::size_t j) {
        if (j == ku) {
          for (std::size_t r = 0; r < ku; ++r)
            for (std::size_t c = 0; c < ku; ++c)
              matrix[r][c] = columns[order[c]][static_cast<int>(perm[c][r])];
          try_matrix(columns);
          return;
        }
        std::iota(perm[j].begin(), perm[j].end(), 0);
        do {
          assign(j + 1);
        } while (std::next_permutation(perm[j].begin(), perm[j].end()));
      };
      assign(1);
    } while (std::next_permutation(order.begin(), order.end()));
  };
  disjoint_tuples(pool, 0, 0, k, chosen, visit);
  return unique_graphs(seen, H2.n(), k);
}

std::uint64_t backward_count(const Hypergraph& H2, const Hypergraph& G, const SwitchTarget& target) {
  return backward_preimages(H2, G, target).size();
}

// ---------------------------------------------------------------- double counting

namespace {

double paper_f_lower(SwitchKind kind, int ell, double tau, const Params& p) {
  const double k = p.k;
  const double d = p.d;
  const double tm = tau * p.M;
  const double base = std::pow(std::max(0.0, tm - 2 * k * k * tau * d), k - 1) / std::tgamma(k);
  switch (kind) {
    case SwitchKind::kRemoveEdge: return base - k * std::pow(2 * tau, k - 1) * std::pow(d, k);
    case SwitchKind::kPairDegree: return ell * (base - k * std::pow(2 * tau, k - 1) * std::pow(d, k));
    case SwitchKind::kCodegree: return ell * (base - (k + 1) * d * std::pow(2 * tau * d, k - 1));
  }
  return 0.0;
}

double paper_b_upper(SwitchKind kind, double tau, const Params& p) {
  const double k = p.k;
  const double d = p.d;
  const double fk1 = std::pow(std::tgamma(k), k - 1);  // ((k-1)!)^{k-1}
  switch (kind) {
    case SwitchKind::kRemoveEdge: return fk1 * std::pow(2 * tau * d, k);
    case SwitchKind::kPairDegree:
      return std::pow(std::tgamma(k + 1), k) * std::pow(2 * tau * d, 2) * std::pow(tau * p.M, k - 2);
    case SwitchKind::kCodegree: return fk1 * d * std::pow(2 * tau * d, k);
  }
  return 0.0;
}

struct Family {
  std::vector<Hypergraph> members;
  std::vector<int> stats;
};

Family enumerate_family(const OrderedHypergraph& G, const Params& params, const SwitchTarget& target,
                        WorkBound bound) {
  Family fam;
  const Hypergraph& base = G.as_set();
  for_each_completion(
      G, params,
      [&](std::span<const Edge> completion) {
        Hypergraph H = base;
        for (const auto& e : completion) H.add(e);
        fam.stats.push_back(switch_statistic(H, base, target));
        fam.members.push_back(std::move(H));
      },
      bound);
  return fam;
}

void validate_target(const OrderedHypergraph& G, const Params& params, const SwitchTarget& target) {
  require(G.n() == params.n && G.k() == params.k, ErrorCode::kDomain, "graph does not match params");
  if (target.kind == SwitchKind::kRemoveEdge) {
    G.as_set().check_edge(target.e);
    require(!G.contains(target.e), ErrorCode::kDomain, "e must lie outside G");
  } else {
    require(target.u != target.v && target.u >= 1 && target.v >= 1 && target.u <= params.n &&
                target.v <= params.n,
            ErrorCode::kDomain, "need distinct vertices u, v in [1, n]");
  }
}

DoubleCountingReport count_step(const Family& fam, const OrderedHypergraph& G, const Params& params,
                                const SwitchTarget& target, int ell) {
  DoubleCountingReport rep;
  rep.target = target;
  rep.ell = ell;
  const Hypergraph& base = G.as_set();
  const auto state = residual_state(G, params);
  rep.degG_holds = true;
  for (Vertex x = 1; x <= params.n; ++x)
    if (state.r(x) > 2 * state.tau * params.d) rep.degG_holds = false;
  rep.f_lower_bound = paper_f_lower(target.kind, ell, state.tau, params);
  rep.b_upper_bound = paper_b_upper(target.kind, state.tau, params);

  bool first_f = true;
  bool first_b = true;
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    if (fam.stats[i] == ell) {
      const auto images = forward_images(fam.members[i], base, target);
      for (const auto& img : images)
        if (switch_statistic(img, base, target) != ell - 1) rep.images_in_target = false;
      const std::uint64_t f = images.size();
      ++rep.source_size;
      rep.edges_forward += f;
      rep.min_f = first_f ? f : std::min(rep.min_f, f);
      rep.max_f = std::max(rep.max_f, f);
      first_f = false;
      if (rep.degG_holds && static_cast<double>(f) < rep.f_lower_bound) rep.f_bound_ok = false;
    } else if (fam.stats[i] == ell - 1) {
      const std::uint64_t b = backward_count(fam.members[i], base, target);
      ++rep.target_size;
      rep.edges_backward += b;
      rep.min_b = first_b ? b : std::min(rep.min_b, b);
      rep.max_b = std::max(rep.max_b, b);
      first_b = false;
      if (rep.degG_holds && static_cast<double>(b) > rep.b_upper_bound) rep.b_bound_ok = false;
    }
  }
  rep.identity_ok = rep.edges_forward == rep.edges_backward;
  const unsigned __int128 lo = static_cast<unsigned __int128>(rep.source_size) * rep.min_f;
  const unsigned __int128 hi = static_cast<unsigned __int128>(rep.target_size) * rep.max_b;
  rep.sandwich_ok = lo <= rep.edges_forward && rep.edges_forward <= hi;
  return rep;
}

}  // namespace

DoubleCountingReport double_counting(const OrderedHypergraph& G, const Params& params,
                                     const SwitchTarget& target, int ell, WorkBound bound) {
  validate_target(G, params, target);
  if (target.kind == SwitchKind::kRemoveEdge) ell = 1;
  require(ell >= 1, ErrorCode::kDomain, "class index must be at least 1");
  const auto fam = enumerate_family(G, params, target, bound);
  return count_step(fam, G, params, target, ell);
}

std::vector<DoubleCountingReport> double_counting_all(const OrderedHypergraph& G, const Params& params,
                                                      const SwitchTarget& target, WorkBound bound) {
  validate_target(G, params, target);
  const auto fam = enumerate_family(G, params, target, bound);
  std::vector<DoubleCountingReport> out;
  if (target.kind == SwitchKind::kRemoveEdge) {
    out.push_back(count_step(fam, G, params, target, 1));
    return out;
  }
  const int L = fam.stats.empty() ? 0 : *std::max_element(fam.stats.begin(), fam.stats.end());
  for (int ell = 1; ell <= L; ++ell) out.push_back(count_step(fam, G, params, target, ell));
  return out;
}

// ---------------------------------------------------------------- estimates

EdgeProbabilityEstimate edge_probability(const OrderedHypergraph& G, const Edge& e, const Params& params,
                                         std::uint64_t trials, Rng& rng) {
  G.as_set().check_edge(e);
  require(!G.contains(e), ErrorCode::kDomain, "e must lie outside G");
  const auto state = residual_state(G, params);
  EdgeProbabilityEstimate out;
  out.trials = trials;
  const RegularSampler sampler(G, params);
  for (std::uint64_t i = 0; i < trials; ++i)
    if (sampler.sample(rng).contains(e)) ++out.hits;
  out.estimate = trials ? static_cast<double>(out.hits) / static_cast<double>(trials) : 0.0;
  out.ci = wilson_interval(out.hits, trials);
  out.scale = state.tau * params.d / std::pow(static_cast<double>(params.n), params.k - 1);
  out.empirical_C0 = out.scale > 0 ? out.estimate / out.scale : 0.0;
  try {
    WorkBound bound = WorkBound::from_env();
    bound.max_nodes = std::min<std::uint64_t>(bound.max_nodes, 5'000'000);
    std::uint64_t with = 0;
    std::uint64_t total = 0;
    for_each_completion(
        G, params,
        [&](std::span<const Edge> completion) {
          ++total;
          if (std::binary_search(completion.begin(), completion.end(), e)) ++with;
        },
        bound);
    if (total > 0) out.exact = static_cast<double>(with) / static_cast<double>(total);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kTooLarge) throw;
  }
  return out;
}

TailEstimate tail_profile(const OrderedHypergraph& G, Vertex u, Vertex v, SwitchStatistic statistic,
                          const Params& params, std::uint64_t trials, Rng& rng, SwitchingConstants constants) {
  const auto state = residual_state(G, params);
  TailEstimate out;
  out.statistic = statistic;
  out.trials = trials;
  out.ell1 = constants.C1 * state.tau * params.d / params.n;
  out.ell2 = constants.C2 * state.tau * params.d * params.d / std::pow(static_cast<double>(params.n), params.k - 1);
  const SwitchTarget target{statistic == SwitchStatistic::kPairDegree ? SwitchKind::kPairDegree : SwitchKind::kCodegree,
                            Edge{}, u, v};
  validate_target(G, params, target);

  std::map<int, std::uint64_t> hist;
  if (trials > 0) {
    const RegularSampler sampler(G, params);
    for (std::uint64_t i = 0; i < trials; ++i)
      ++hist[switch_statistic(sampler.sample(rng).as_set(), G.as_set(), target)];
    const int top = hist.rbegin()->first;
    std::uint64_t above = trials;
    for (int ell = 0; ell <= top; ++ell) {
      above -= hist.count(ell) ? hist[ell] : 0;
      out.empirical_tail[ell] = static_cast<double>(above) / static_cast<double>(trials);
    }
  }

  try {
    WorkBound bound = WorkBound::from_env();
    bound.max_nodes = std::min<std::uint64_t>(bound.max_nodes, 5'000'000);
    const auto classes = switching_class_sizes(G, u, v, statistic, params, bound);
    const mpz_class total = classes.total();
    mpz_class above = total;
    for (int ell = 0; ell <= classes.L; ++ell) {
      const auto it = classes.sizes.find(ell);
      if (it != classes.sizes.end()) above -= it->second;
      out.exact_tail[ell] = total > 0 ? mpq_class(above, total).get_d() : 0.0;
      if (ell >= 1) {
        const auto prev = classes.sizes.find(ell - 1);
        if (prev != classes.sizes.end() && prev->second > 0)
          out.class_ratios[ell] =
              mpq_class(it == classes.sizes.end() ? mpz_class(0) : it->second, prev->second).get_d();
      }
    }
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kTooLarge) throw;
  }

  auto non_increasing = [](const std::map<int, double>& tail) {
    double last = 1.0;
    for (const auto& [_, p] : tail) {
      if (p > last + 1e-15) return false;
      last = p;
    }
    return true;
  };
  out.monotone = non_increasing(out.empirical_tail) && non_increasing(out.exact_tail);
  const double threshold = statistic == SwitchStatistic::kPairDegree ? out.ell1 : out.ell2;
  for (const auto& [ell, ratio] : out.class_ratios) {
    if (ell < threshold) continue;
    if (ratio >= 1.0) out.decays_above_threshold = false;
    if (ratio > 0.5) out.halving_above_threshold = false;
  }
  return out;
}

}  // namespace hypercouple

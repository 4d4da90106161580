#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>

#include "hypercouple/coupling.hpp"

namespace hypercouple {

SSizeReport s_size_diagnostics(const CouplingConfig& config, std::span<const std::size_t> s_sizes) {
  SSizeReport r;
  r.traces = s_sizes.size();
  r.trials_per_trace = config.steps;
  r.q = 1.0 - config.epsilon();
  const double T = config.steps;
  const double q = r.q;
  r.expected_mean = T * q;
  r.expected_variance = T * q * (1.0 - q);

  std::vector<double> xs(s_sizes.begin(), s_sizes.end());
  const auto mom = moments(xs);
  r.mean = mom.mean;
  r.variance = mom.variance;
  const double N = static_cast<double>(r.traces);
  if (r.traces >= 4 && r.expected_variance > 0.0) {
    r.mean_z = (r.mean - r.expected_mean) / std::sqrt(r.expected_variance / N);
    const double v = r.expected_variance;
    const double mu4 = v * (1.0 + 3.0 * (T - 2.0) * q * (1.0 - q));
    const double var_of_var = (mu4 - v * v * (N - 3.0) / (N - 1.0)) / N;
    r.variance_z = (r.variance - v) / std::sqrt(var_of_var);
  }
  r.mean_ok = std::abs(r.mean_z) <= 3.0;
  r.variance_ok = std::abs(r.variance_z) <= 3.0;

  const auto m = static_cast<std::size_t>(config.m);
  for (auto s : s_sizes)
    if (s < m) ++r.below_m;
  r.p_below_m = r.traces ? static_cast<double>(r.below_m) / N : 0.0;
  r.p_below_m_ci = wilson_interval(r.below_m, r.traces);
  if (m > 0) {
    if (q >= 1.0) {
      r.p_below_m_binomial = 0.0;
    } else {
      boost::math::binomial dist(T, q);
      r.p_below_m_binomial = boost::math::cdf(dist, static_cast<double>(m) - 1.0);
    }
  }
  r.chebyshev_bound = static_cast<double>(config.params.k) /
                      (config.epsilon() * config.params.n * config.params.d);
  const double mc_error = r.traces ? std::sqrt(r.p_below_m * (1.0 - r.p_below_m) / N) : 0.0;
  r.chebyshev_ok = r.p_below_m <= r.chebyshev_bound + 3.0 * mc_error;
  return r;
}

ProcessTrajectory expose_process(const Params& params, const RegularSampler& sampler, Rng& rng) {
  ProcessTrajectory out;
  out.R = sampler.sample(rng);
  const auto M = static_cast<std::size_t>(params.M);
  const auto n = static_cast<std::size_t>(params.n);
  out.X.assign(M + 1, std::vector<int>(n + 1, 0));
  for (std::size_t t = M; t-- > 0;) {
    out.X[t] = out.X[t + 1];
    for (Vertex v : out.R[t]) ++out.X[t][static_cast<std::size_t>(v)];
  }
  return out;
}

ProcessTrajectory expose_process(const Params& params, Rng& rng) {
  const RegularSampler sampler(OrderedHypergraph(params.n, params.k), params);
  return expose_process(params, sampler, rng);
}

Edge choose_probe_f(const OrderedHypergraph& G, const Params& params, WorkBound bound) {
  const auto dist = exact_next_edge_distribution(G, params, bound);
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.edges.size(); ++i)
    if (dist.completions_with[i] > dist.completions_with[best]) best = i;
  return dist.edges[best];
}

// ---------------------------------------------------------------- mutual simplicity

namespace {

int pair_degree_in(const std::vector<MultiEdge>& tail, Vertex a, Vertex b) {
  int c = 0;
  for (const auto& x : tail)
    if (std::find(x.begin(), x.end(), a) != x.end() && std::find(x.begin(), x.end(), b) != x.end()) ++c;
  return c;
}

int degree_in(const std::vector<MultiEdge>& tail, Vertex a) {
  int c = 0;
  for (const auto& x : tail)
    if (std::find(x.begin(), x.end(), a) != x.end()) ++c;
  return c;
}

// (x \ from) + to, as a multiset; from is assumed to occur in x.
MultiEdge replaced(const MultiEdge& x, Vertex from, Vertex to) {
  std::vector<Vertex> out(x.begin(), x.end());
  *std::find(out.begin(), out.end(), from) = to;
  return MultiEdge::from(out);
}

}  // namespace

NicenessReport mutual_simplicity_probe(const OrderedHypergraph& G, const Edge& e, const Edge& f,
                                       const Params& params, std::uint64_t trials, Rng& rng,
                                       SwitchingConstants constants, bool with_exact) {
  G.as_set().check_edge(e);
  G.as_set().check_edge(f);
  require(!G.contains(e) && !G.contains(f), ErrorCode::kDomain, "e and f must lie outside G");
  const auto state = residual_state(G, params);
  require(state.t < params.M, ErrorCode::kDomain, "prefix already has M edges");

  NicenessReport rep;
  rep.e = e;
  rep.f = f;
  std::vector<Vertex> us;  // f \ e
  std::vector<Vertex> vs;  // e \ f
  for (Vertex x : f)
    if (!e.contains(x)) us.push_back(x);
  for (Vertex x : e)
    if (!f.contains(x)) vs.push_back(x);
  rep.s = static_cast<int>(us.size());
  const auto s = us.size();
  rep.trials = trials;

  const auto Gf = appended(G, f);
  bool f_ok = true;
  for (Vertex x : f)
    if (state.r(x) < 1) f_ok = false;
  require(f_ok, ErrorCode::kInadmissible, "G + f exceeds degree d");
  bool degenerate = false;
  for (Vertex x : vs)
    if (state.r(x) < 1) degenerate = true;

  const double tau_f = 1.0 - static_cast<double>(state.t + 1) / params.M;
  const double log_term = params.k * std::log2(static_cast<double>(params.n));
  const double ell1 = constants.C1 * tau_f * params.d / params.n;
  const double ell2 = constants.C2 * tau_f * params.d * params.d / std::pow(static_cast<double>(params.n), params.k - 1);

  std::array<double, 4> bound_sums{};
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    auto ext = sample_multi_extension(Gf, params, rng);
    const bool f_simple = ext.is_simple();
    if (degenerate) {
      ++rep.degenerate;
      if (f_simple) ++rep.f_simple;
      continue;
    }
    // Pi* : for each i, a uniformly chosen copy of v_i becomes u_i.
    std::vector<std::pair<std::size_t, int>> copies;  // (tuple index, slot)
    std::vector<std::size_t> chosen(s);
    std::vector<MultiEdge> tail = ext.tail;
    for (std::size_t i = 0; i < s; ++i) {
      copies.clear();
      for (std::size_t q = 0; q < tail.size(); ++q)
        for (int slot = 0; slot < tail[q].size(); ++slot)
          if (tail[q][slot] == vs[i]) copies.emplace_back(q, slot);
      require(!copies.empty(), ErrorCode::kInternal, "no copy of v_i in the residual permutation");
      const auto pick = copies[static_cast<std::size_t>(rng.below(copies.size()))];
      chosen[i] = pick.first;
      tail[pick.first] = replaced(tail[pick.first], vs[i], us[i]);
    }
    MultiExtension ext_e;
    ext_e.base = appended(G, e);
    ext_e.tail = tail;
    const bool e_simple = ext_e.is_simple();
    if (f_simple) ++rep.f_simple;
    if (e_simple) ++rep.e_simple;
    if (!f_simple) continue;

    const auto H = ext.to_ordered();
    const Hypergraph& Hs = H.as_set();
    const bool n1 = !Hs.contains(e);
    int max_pair = 0;
    int max_cod = 0;
    for (std::size_t i = 0; i < s; ++i) {
      max_pair = std::max(max_pair, pair_degree_in(ext.tail, us[i], vs[i]));
      max_cod = std::max(max_cod, codegree_rel(Hs, Gf.as_set(), us[i], vs[i]));
    }
    const bool n3 = max_pair <= ell1 + log_term;
    const bool n2 = max_cod <= ell2 + log_term;
    rep.nice1 += n1;
    rep.nice2 += n2;
    rep.nice3 += n3;

    std::array<bool, 4> ev{};
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i + 1; j < s; ++j)
        if (chosen[i] == chosen[j]) ev[0] = true;
    std::vector<MultiEdge> swapped(s);
    for (std::size_t i = 0; i < s; ++i) {
      const auto& ei = ext.tail[chosen[i]];
      swapped[i] = replaced(ei, vs[i], us[i]);
      if (swapped[i].is_loop()) ev[1] = true;
      else if (Hs.contains(swapped[i].to_edge())) ev[2] = true;
    }
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i + 1; j < s; ++j)
        if (swapped[i] == swapped[j]) ev[3] = true;

    if (n1 && !e_simple && !(ev[0] || ev[1] || ev[2] || ev[3])) ++rep.invariant_violations;

    if (n1 && n2 && n3) {
      ++rep.nice;
      if (e_simple) ++rep.e_simple_given_nice;
      for (int q = 0; q < 4; ++q) rep.events[static_cast<std::size_t>(q)] += ev[static_cast<std::size_t>(q)];
      std::array<double, 4> b{};
      for (std::size_t i = 0; i < s; ++i) {
        const double dv = degree_in(ext.tail, vs[i]);
        b[1] += pair_degree_in(ext.tail, us[i], vs[i]) / dv;
        b[2] += codegree_rel(Hs, Gf.as_set(), us[i], vs[i]) / dv;
        for (std::size_t j = i + 1; j < s; ++j) {
          const double dvj = degree_in(ext.tail, vs[j]);
          b[0] += pair_degree_in(ext.tail, vs[i], vs[j]) / (dv * dvj);
          b[3] += pair_degree_in(ext.tail, vs[i], us[j]) / (dv * dvj);
        }
      }
      for (int q = 0; q < 4; ++q) bound_sums[static_cast<std::size_t>(q)] += b[static_cast<std::size_t>(q)];
    }
  }
  for (int q = 0; q < 4; ++q)
    rep.event_bounds[static_cast<std::size_t>(q)] = rep.nice ? bound_sums[static_cast<std::size_t>(q)] / rep.nice : 0.0;
  rep.e_simple_ci = wilson_interval(rep.e_simple, trials);
  rep.f_simple_ci = wilson_interval(rep.f_simple, trials);
  rep.ratio_estimate = rep.f_simple ? static_cast<double>(rep.e_simple) / static_cast<double>(rep.f_simple) : 0.0;

  if (with_exact && !degenerate) {
    try {
      WorkBound bound = WorkBound::from_env();
      bound.max_nodes = std::min<std::uint64_t>(bound.max_nodes, 20'000'000);
      const auto pe = count_simple_permutations(appended(G, e), params, bound).simple_probability();
      const auto pf = count_simple_permutations(Gf, params, bound).simple_probability();
      if (pf != 0) rep.ratio_exact = pe / pf;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kTooLarge) throw;
    }
  }
  return rep;
}

}  // namespace hypercouple

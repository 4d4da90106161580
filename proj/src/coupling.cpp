#include "hypercouple/coupling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace hypercouple {

using i128 = __int128;

PMode PMode::parse(std::string_view text) {
  if (text == "exact") return PMode{true, 0};
  if (text.substr(0, 3) == "mc:") {
    std::uint64_t trials = 0;
    const auto body = text.substr(3);
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), trials);
    if (ec == std::errc() && ptr == body.data() + body.size() && trials > 0) return PMode{false, trials};
  }
  fail(ErrorCode::kInvalidConfig, "p-mode must be 'exact' or 'mc:<trials>', got '" + std::string(text) + "'");
}

std::string PMode::to_string() const {
  return exact ? "exact" : "mc:" + std::to_string(mc_trials);
}

int choose_epsilon_numerator(int M, double gamma) {
  // j / M <= gamma / 3 with a small allowance for gamma given in decimal.
  const int j = static_cast<int>(std::floor(gamma * M / 3.0 + 1e-9));
  require(j >= 1, ErrorCode::kInvalidConfig,
          "gamma / 3 < 1 / M: no epsilon = j / M with (1 - epsilon) M integral fits");
  return std::min(j, M - 1);
}

CouplingConfig CouplingConfig::make(const Params& params, double gamma, std::optional<double> epsilon,
                                    PMode p_mode) {
  require(gamma > 0.0 && gamma < 1.0, ErrorCode::kInvalidConfig, "gamma must lie in (0, 1)");
  CouplingConfig c;
  c.params = params;
  c.gamma = gamma;
  c.p_mode = p_mode;
  const double m_real = (1.0 - gamma) * params.M;
  const double m_round = std::round(m_real);
  require(std::abs(m_real - m_round) < 1e-9, ErrorCode::kInvalidConfig,
          "(1 - gamma) nd / k must be an integer");
  c.m = static_cast<int>(m_round);
  if (epsilon) {
    const double j_real = *epsilon * params.M;
    const double j_round = std::round(j_real);
    require(*epsilon > 0.0 && *epsilon < 1.0, ErrorCode::kInvalidConfig, "epsilon must lie in (0, 1)");
    require(std::abs(j_real - j_round) < 1e-9, ErrorCode::kInvalidConfig,
            "(1 - epsilon) M must be an integer");
    c.eps_num = static_cast<int>(j_round);
    require(c.eps_num >= 1 && 3.0 * c.eps_num <= gamma * params.M + 1e-9, ErrorCode::kInvalidConfig,
            "epsilon must satisfy epsilon <= gamma / 3");
  } else {
    c.eps_num = choose_epsilon_numerator(params.M, gamma);
  }
  c.steps = params.M - c.eps_num;
  require(c.m <= params.M - 3 * c.eps_num, ErrorCode::kInvalidConfig, "need m <= (1 - 3 epsilon) M");
  return c;
}

// ---------------------------------------------------------------- oracle

namespace {

std::string state_key(const OrderedHypergraph& G) {
  std::vector<std::uint64_t> ranks;
  ranks.reserve(G.size());
  for (const auto& e : G.edges()) ranks.push_back(colex_rank(e));
  std::sort(ranks.begin(), ranks.end());
  std::string key;
  for (auto r : ranks) key += std::to_string(r) + ',';
  return key;
}

void finish_law(NextEdgeLaw& law, const Params& params) {
  std::uint64_t total = 0;
  for (auto w : law.weights) total += w;
  const double remaining = static_cast<double>(law.edges.size());
  law.p.resize(law.weights.size());
  std::uint64_t min_w = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < law.weights.size(); ++i) {
    law.p[i] = total ? static_cast<double>(law.weights[i]) / static_cast<double>(total) : 0.0;
    min_w = std::min(min_w, law.weights[i]);
  }
  law.min_ratio = total ? static_cast<double>(min_w) / static_cast<double>(total) * remaining : 0.0;
  (void)params;
}

}  // namespace

NextEdgeOracle::NextEdgeOracle(const Params& params, PMode mode, std::uint64_t seed, WorkBound bound)
    : params_(params), mode_(mode), seed_(seed), bound_(bound) {}

std::size_t NextEdgeOracle::cached_states() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::shared_ptr<const NextEdgeLaw> NextEdgeOracle::law(const OrderedHypergraph& G) {
  const auto key = state_key(G);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto computed = compute(G);
  std::lock_guard lock(mutex_);
  return cache_.emplace(key, std::move(computed)).first->second;
}

std::shared_ptr<const NextEdgeLaw> NextEdgeOracle::compute(const OrderedHypergraph& G) const {
  auto law = std::make_shared<NextEdgeLaw>();
  law->t = static_cast<int>(G.size());
  law->exact = mode_.exact;
  if (mode_.exact) {
    const auto dist = exact_next_edge_distribution(G, params_, bound_);
    law->edges = dist.edges;
    for (const auto& c : dist.completions_with) law->weights.push_back(c.get_ui());
    law->min_ratio_exact = dist.min_ratio();
    finish_law(*law, params_);
    law->min_ratio_ci = {law->min_ratio, law->min_ratio};
    return law;
  }

  // Monte Carlo: fraction of uniform completions containing e, over M - t.
  law->edges = complement_edges(G.as_set());
  std::unordered_map<Edge, std::size_t, EdgeHash> index;
  for (std::size_t i = 0; i < law->edges.size(); ++i) index.emplace(law->edges[i], i);
  law->weights.assign(law->edges.size(), 0);
  std::uint64_t state_hash = 0;
  for (char ch : state_key(G)) state_hash = splitmix64(state_hash ^ static_cast<unsigned char>(ch));
  Rng rng(RngStream{seed_, state_hash}.substream(5));
  const RegularSampler sampler(G, params_);
  for (std::uint64_t i = 0; i < mode_.mc_trials; ++i) {
    const auto H = sampler.sample(rng);
    for (std::size_t pos = G.size(); pos < H.size(); ++pos) ++law->weights[index.at(H[pos])];
  }
  finish_law(*law, params_);
  const double scale = static_cast<double>(law->edges.size()) / (params_.M - law->t);
  double lo = std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (auto w : law->weights) {
    const auto ci = wilson_interval(w, mode_.mc_trials);
    lo = std::min(lo, ci.lo * scale);
    hi = std::min(hi, ci.hi * scale);
  }
  law->min_ratio_ci = {lo, hi};
  return law;
}

// ---------------------------------------------------------------- A_t

AtVerdict check_A_t(const NextEdgeLaw& law, const CouplingConfig& config) {
  AtVerdict v;
  v.min_ratio = law.min_ratio;
  const i128 M = config.params.M;
  const i128 remaining = static_cast<i128>(law.edges.size());
  i128 total = 0;
  std::uint64_t min_w = std::numeric_limits<std::uint64_t>::max();
  for (auto w : law.weights) {
    total += w;
    min_w = std::min(min_w, w);
  }
  // min_w / total * (C - t) >= (M - j) / M
  v.holds = total > 0 && static_cast<i128>(min_w) * remaining * M >= (M - config.eps_num) * total;
  if (!law.exact) {
    const double threshold = 1.0 - config.epsilon();
    v.uncertain = law.min_ratio_ci.lo < threshold && threshold <= law.min_ratio_ci.hi;
  }
  return v;
}

AtVerdict check_A_t(const OrderedHypergraph& G, const CouplingConfig& config, NextEdgeOracle& oracle) {
  return check_A_t(*oracle.law(G), config);
}

const char* to_string(Branch branch) {
  switch (branch) {
    case Branch::kFresh: return "fresh";
    case Branch::kBijection: return "bijection";
    case Branch::kZeta: return "zeta";
    case Branch::kDirect: return "direct";
    case Branch::kTail: return "tail";
  }
  return "?";
}

Edge monotone_bijection(const Hypergraph& R, const Hypergraph& G, const Edge& e) {
  std::vector<Edge> from;
  std::vector<Edge> to;
  for (const auto& x : R.sorted_edges())
    if (!G.contains(x)) from.push_back(x);
  for (const auto& x : G.sorted_edges())
    if (!R.contains(x)) to.push_back(x);
  require(from.size() == to.size(), ErrorCode::kInternal, "bijection between sets of different sizes");
  const auto it = std::lower_bound(from.begin(), from.end(), e);
  require(it != from.end() && *it == e, ErrorCode::kDomain, "edge outside the bijection's domain");
  return to[static_cast<std::size_t>(it - from.begin())];
}

// ---------------------------------------------------------------- coupling

namespace {

std::size_t draw_weighted(const std::vector<i128>& weights, Rng& rng) {
  i128 total = 0;
  for (auto w : weights) total += w;
  require(total > 0 && total <= static_cast<i128>(std::numeric_limits<std::uint64_t>::max()), ErrorCode::kInternal,
          "weights do not form a distribution");
  i128 x = rng.below(static_cast<std::uint64_t>(total));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (x < weights[i]) return i;
    x -= weights[i];
  }
  fail(ErrorCode::kInternal, "weighted draw fell off the end");
}

Edge draw_from_law(const NextEdgeLaw& law, Rng& rng) {
  std::vector<i128> w(law.weights.begin(), law.weights.end());
  return law.edges[draw_weighted(w, rng)];
}

Edge draw_zeta(const NextEdgeLaw& law, const CouplingConfig& config, Rng& rng) {
  const i128 M = config.params.M;
  const i128 remaining = static_cast<i128>(law.edges.size());
  i128 total = 0;
  for (auto w : law.weights) total += w;
  std::vector<i128> z(law.weights.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = static_cast<i128>(law.weights[i]) * remaining * M - (M - config.eps_num) * total;
    if (z[i] < 0) fail(ErrorCode::kInternal, "negative zeta weight under A_t");
  }
  return law.edges[draw_weighted(z, rng)];
}

// Direct draw from p_{t+1}(.|R): exact weights, or in MC mode the next edge
// of one uniformly sampled completion.
Edge draw_direct(const NextEdgeLaw* law, const OrderedHypergraph& R, const CouplingConfig& config,
                 NextEdgeOracle& oracle, Rng& rng) {
  if (config.p_mode.exact) return draw_from_law(law ? *law : *oracle.law(R), rng);
  const auto H = sample_regular(R, config.params, rng);
  return H[R.size()];
}

}  // namespace

CouplingTrace run_coupling(const CouplingConfig& config, NextEdgeOracle& oracle, RngStream stream) {
  const Params& P = config.params;
  require(oracle.params() == P, ErrorCode::kDomain, "oracle built for different params");
  Rng eps_rng(stream.substream(0));
  Rng xi_rng(stream.substream(1));
  Rng eta_rng(stream.substream(2));
  EdgeProcess pool(P.n, P.k);

  CouplingTrace trace;
  trace.G_process = OrderedHypergraph(P.n, P.k);
  trace.R = OrderedHypergraph(P.n, P.k);
  trace.steps.reserve(static_cast<std::size_t>(P.M));
  for (int t = 0; t < P.M; ++t) {
    CouplingStep step;
    step.t = t;
    if (t < config.steps) {
      const Edge eps = pool.draw(eps_rng);
      // P(xi = 1) = (M - j) / M = 1 - epsilon, exactly.
      step.xi = xi_rng.below(static_cast<std::uint64_t>(P.M)) >= static_cast<std::uint64_t>(config.eps_num);
      step.eps = eps;
      const auto law = oracle.law(trace.R);
      const auto verdict = check_A_t(*law, config);
      step.A_t = verdict.holds;
      step.uncertain = verdict.uncertain;
      if (verdict.holds) {
        if (step.xi) {
          if (!trace.R.contains(eps)) {
            step.eta = eps;
            step.branch = Branch::kFresh;
          } else {
            step.eta = monotone_bijection(trace.R.as_set(), trace.G_process.as_set(), eps);
            step.branch = Branch::kBijection;
          }
        } else {
          step.eta = draw_zeta(*law, config, eta_rng);
          step.branch = Branch::kZeta;
        }
      } else {
        step.eta = draw_direct(law.get(), trace.R, config, oracle, eta_rng);
        step.branch = Branch::kDirect;
      }
      trace.G_process.push_back(eps);
      if (step.xi) trace.S.push_back(eps);
      trace.A_all = trace.A_all && verdict.holds;
      trace.uncertain = trace.uncertain || verdict.uncertain;
      if (verdict.holds && step.xi && !(trace.R.contains(eps) || step.eta == eps))
        fail(ErrorCode::kInternal, "A_t and xi = 1 but eps_{t+1} is not in R'(t+1)");
    } else {
      step.eta = draw_direct(nullptr, trace.R, config, oracle, eta_rng);
      step.branch = Branch::kTail;
    }
    trace.R.push_back(step.eta);
    trace.steps.push_back(step);
  }

  const auto m = static_cast<std::size_t>(config.m);
  trace.S_big_enough = trace.S.size() >= m;
  const auto& source = trace.S_big_enough ? trace.S : trace.G_process.edges();
  trace.embedded.assign(source.begin(), source.begin() + static_cast<std::ptrdiff_t>(m));
  trace.contained = std::all_of(trace.embedded.begin(), trace.embedded.end(),
                                [&](const Edge& e) { return trace.R.contains(e); });
  return trace;
}

double default_gnp_p(const CouplingConfig& config) {
  return (1.0 - 2.0 * config.gamma) * config.params.d / static_cast<double>(config.params.max_degree());
}

GnpTrace run_coupling_gnp(const CouplingConfig& config, double p, NextEdgeOracle& oracle, RngStream stream) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::kInvalidConfig, "p must lie in [0, 1]");
  GnpTrace out;
  out.p = p;
  out.coupling = run_coupling(config, oracle, stream);
  Rng b_rng(stream.substream(3));
  const std::uint64_t C = config.params.total_edges();
  for (std::uint64_t i = 0; i < C; ++i)
    if (b_rng.bernoulli(p)) ++out.B;
  const auto m = static_cast<std::uint64_t>(config.m);
  const auto& S = out.coupling.S;
  out.B_gt_m = out.B > m;
  out.S_lt_m = S.size() < m;
  out.from_S = !out.B_gt_m && !out.S_lt_m;
  if (out.from_S) {
    out.gnp_edges.assign(S.begin(), S.begin() + static_cast<std::ptrdiff_t>(out.B));
  } else {
    Rng g_rng(stream.substream(4));
    out.gnp_edges = sample_gnm(config.params.n, config.params.k, out.B, g_rng).edges();
  }
  out.contained = std::all_of(out.gnp_edges.begin(), out.gnp_edges.end(),
                              [&](const Edge& e) { return out.coupling.R.contains(e); });
  return out;
}

}  // namespace hypercouple

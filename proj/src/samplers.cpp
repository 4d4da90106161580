#include "hypercouple/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "hypercouple/completion_table.hpp"
#include "hypercouple/exact_enum.hpp"

namespace hypercouple {

EdgeProcess::EdgeProcess(int n, int k) : EdgeProcess(Hypergraph(n, k)) {}

EdgeProcess::EdgeProcess(const Hypergraph& G) : pool_(complement_edges(G)) {}

Edge EdgeProcess::draw(Rng& rng) {
  require(!pool_.empty(), ErrorCode::kDomain, "no edges left to draw");
  const auto i = static_cast<std::size_t>(rng.below(pool_.size()));
  std::swap(pool_[i], pool_.back());
  Edge e = pool_.back();
  pool_.pop_back();
  return e;
}

OrderedHypergraph sample_gnm(int n, int k, std::uint64_t m, Rng& rng) {
  require(k >= 1 && k <= n, ErrorCode::kDomain, "need 1 <= k <= n");
  require(m <= binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)), ErrorCode::kDomain,
          "m exceeds binom(n, k)");
  EdgeProcess process(n, k);
  OrderedHypergraph out(n, k);
  for (std::uint64_t i = 0; i < m; ++i) out.push_back(process.draw(rng));
  return out;
}

Hypergraph sample_gnp(int n, int k, double p, Rng& rng) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::kDomain, "p must lie in [0, 1]");
  Hypergraph out(n, k);
  for_each_k_subset(n, k, [&](const Edge& e) {
    if (rng.bernoulli(p)) out.add(e);
  });
  return out;
}

// ---------------------------------------------------------------- configuration model

bool MultiExtension::is_simple() const {
  std::vector<MultiEdge> seen;
  seen.reserve(tail.size());
  for (const auto& e : tail) {
    if (e.is_loop()) return false;
    if (base.contains(e.to_edge())) return false;
    seen.push_back(e);
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

OrderedHypergraph MultiExtension::to_ordered() const {
  require(is_simple(), ErrorCode::kDomain, "multi-extension is not simple");
  OrderedHypergraph out = base;
  for (const auto& e : tail) out.push_back(e.to_edge());
  return out;
}

MultiExtension sample_multi_extension(const OrderedHypergraph& G, const Params& params, Rng& rng) {
  const auto state = residual_state(G, params);
  std::vector<Vertex> copies;
  copies.reserve(static_cast<std::size_t>(state.total()));
  for (Vertex v = 1; v <= params.n; ++v)
    for (int c = 0; c < state.r(v); ++c) copies.push_back(v);
  if (copies.size() % static_cast<std::size_t>(params.k) != 0)
    fail(ErrorCode::kInternal, "residual multiset size not divisible by k");
  rng.shuffle(std::span<Vertex>(copies));
  MultiExtension ext;
  ext.base = G;
  const auto k = static_cast<std::size_t>(params.k);
  ext.tail.reserve(copies.size() / k);
  for (std::size_t i = 0; i < copies.size(); i += k)
    ext.tail.push_back(MultiEdge::from(std::span<const Vertex>(copies.data() + i, k)));
  return ext;
}

SimplicityEstimate simplicity_probability(const OrderedHypergraph& G, const Params& params,
                                          std::uint64_t trials, Rng& rng, bool with_exact) {
  SimplicityEstimate out;
  out.trials = trials;
  for (std::uint64_t i = 0; i < trials; ++i)
    if (sample_multi_extension(G, params, rng).is_simple()) ++out.simple;
  out.estimate = trials ? static_cast<double>(out.simple) / static_cast<double>(trials) : 0.0;
  out.ci = wilson_interval(out.simple, trials);
  if (with_exact) {
    try {
      WorkBound bound = WorkBound::from_env();
      bound.max_nodes = std::min<std::uint64_t>(bound.max_nodes, 5'000'000);
      const auto family = count_extensions(G, params, false, bound);
      const auto state = residual_state(G, params);
      const unsigned long remaining = static_cast<unsigned long>(params.M - state.t);
      mpz_class num = family.unordered_count * factorial(remaining);
      mpz_class kfac_pow;
      mpz_pow_ui(kfac_pow.get_mpz_t(), factorial(static_cast<unsigned long>(params.k)).get_mpz_t(), remaining);
      num *= kfac_pow;
      mpq_class p(num, configuration_count(G, params));
      p.canonicalize();
      out.exact = p;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kTooLarge) throw;
    }
  }
  return out;
}

std::uint64_t default_max_attempts(double simple_probability) {
  const double p = std::max(simple_probability, 1e-6);
  const auto attempts = static_cast<std::uint64_t>(10.0 * std::ceil(1.0 / p));
  return std::min<std::uint64_t>(attempts, 10'000'000);
}

namespace {

// G followed by every edge outside G and outside `avoid`, in uniform random order.
OrderedHypergraph shuffled_complement(const OrderedHypergraph& G, Rng& rng, const Hypergraph& avoid) {
  std::vector<Edge> rest;
  for_each_complement_edge(G.as_set(), [&](const Edge& e) {
    if (!avoid.contains(e)) rest.push_back(e);
  });
  rng.shuffle(std::span<Edge>(rest));
  OrderedHypergraph out = G;
  for (const auto& e : rest) out.push_back(e);
  return out;
}

}  // namespace

OrderedHypergraph sample_regular(const OrderedHypergraph& G, const Params& params, Rng& rng,
                                 std::uint64_t max_attempts, std::uint64_t* attempts_used) {
  residual_state(G, params);
  if (params.is_complete()) {
    if (attempts_used) *attempts_used = 1;
    return shuffled_complement(G, rng, Hypergraph(params.n, params.k));
  }
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    auto ext = sample_multi_extension(G, params, rng);
    if (ext.is_simple()) {
      if (attempts_used) *attempts_used = attempt;
      return ext.to_ordered();
    }
  }
  fail(ErrorCode::kRejectionBudget, "rejection budget exceeded (possibly inadmissible G)");
}

// ---------------------------------------------------------------- RegularSampler

RegularSampler::RegularSampler(const OrderedHypergraph& G, const Params& params, Method method,
                               std::uint64_t table_states)
    : base_(G), params_(params), method_(method) {
  residual_state(G, params);
  max_attempts_ = default_max_attempts(0.0);
  if (method_ == Method::kAuto || method_ == Method::kComplete) {
    if (params.is_complete()) {
      method_ = Method::kComplete;
      return;
    }
    require(method_ == Method::kAuto, ErrorCode::kDomain, "complete method needs d = binom(n-1, k-1)");
    // Fixed pilot stream: the method choice depends only on (G, params).
    Rng pilot(RngStream{0x70696c6f74ULL, 0});
    std::uint64_t hits = 0;
    constexpr std::uint64_t kPilot = 2000;
    for (std::uint64_t i = 0; i < kPilot; ++i)
      if (sample_multi_extension(G, params, pilot).is_simple()) ++hits;
    const double p_hat = static_cast<double>(hits) / kPilot;
    max_attempts_ = default_max_attempts(p_hat);
    method_ = p_hat >= 0.01 ? Method::kRejection : Method::kTable;
  }
  if (method_ == Method::kTable) {
    const auto full = static_cast<int>(params.max_degree());
    complement_ = G.empty() && full - params.d < params.d;
    try {
      if (complement_) {
        const auto dual = Params::make(params.n, params.k, full - params.d);
        table_ = std::make_unique<CompletionTable>(CompletionTable::build(G, dual, table_states));
      } else {
        table_ = std::make_unique<CompletionTable>(CompletionTable::build(G, params, table_states));
      }
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kTooLarge || method != Method::kAuto) throw;
      table_.reset();
      complement_ = false;
      method_ = Method::kRejection;
    }
  }
}

RegularSampler::~RegularSampler() = default;
RegularSampler::RegularSampler(RegularSampler&&) noexcept = default;
RegularSampler& RegularSampler::operator=(RegularSampler&&) noexcept = default;

OrderedHypergraph RegularSampler::sample(Rng& rng) const {
  switch (method_) {
    case Method::kComplete:
      return shuffled_complement(base_, rng, Hypergraph(params_.n, params_.k));
    case Method::kRejection:
      return sample_regular(base_, params_, rng, max_attempts_);
    case Method::kTable:
      if (complement_) {
        const auto dual = table_->sample(rng);
        return shuffled_complement(OrderedHypergraph(params_.n, params_.k), rng,
                                   Hypergraph(params_.n, params_.k, dual));
      }
      return table_->sample_ordered(rng);
    case Method::kAuto:
      break;
  }
  fail(ErrorCode::kInternal, "sampler method unresolved");
}

const char* to_string(RegularSampler::Method method) {
  switch (method) {
    case RegularSampler::Method::kAuto: return "auto";
    case RegularSampler::Method::kRejection: return "rejection";
    case RegularSampler::Method::kTable: return "table";
    case RegularSampler::Method::kComplete: return "complete";
  }
  return "?";
}

}  // namespace hypercouple

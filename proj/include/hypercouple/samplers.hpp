#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "hypercouple/core.hpp"
#include "hypercouple/rng.hpp"
#include "hypercouple/stats.hpp"

namespace hypercouple {

/// Uniform draws without replacement from K_n minus the edges drawn so far.
class EdgeProcess {
 public:
  EdgeProcess(int n, int k);
  /// Starts from K_n \ G.
  explicit EdgeProcess(const Hypergraph& G);

  std::size_t remaining() const { return pool_.size(); }
  Edge draw(Rng& rng);

 private:
  std::vector<Edge> pool_;
};

/// Uniform ordered m-edge k-graph; every prefix is distributed as G(t).
OrderedHypergraph sample_gnm(int n, int k, std::uint64_t m, Rng& rng);

Hypergraph sample_gnp(int n, int k, double p, Rng& rng);

/// G followed by M - t k-tuples of a random permutation of the residual multiset.
struct MultiExtension {
  OrderedHypergraph base;
  std::vector<MultiEdge> tail;

  /// No loops, no repeated tuples, no tuple equal to an edge of base.
  bool is_simple() const;
  /// base + tail as an ordered simple k-graph; throws kDomain if not simple.
  OrderedHypergraph to_ordered() const;
};

MultiExtension sample_multi_extension(const OrderedHypergraph& G, const Params& params, Rng& rng);

struct SimplicityEstimate {
  std::uint64_t simple = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  Interval ci;
  /// |R_G| (k!)^{M-t} prod r! / (k(M-t))!, when the oracle fits its budget.
  std::optional<mpq_class> exact;
};

SimplicityEstimate simplicity_probability(const OrderedHypergraph& G, const Params& params,
                                          std::uint64_t trials, Rng& rng, bool with_exact = true);

/// 10 * ceil(1 / max(p, 1e-6)), capped at 10^7.
std::uint64_t default_max_attempts(double simple_probability);

/// Rejection sampling from the configuration model. When d = binom(n-1, k-1)
/// the answer is K_n in uniformly random order, with no rejection.
OrderedHypergraph sample_regular(const OrderedHypergraph& G, const Params& params, Rng& rng,
                                 std::uint64_t max_attempts = default_max_attempts(0.0),
                                 std::uint64_t* attempts_used = nullptr);

class CompletionTable;

/// Reusable uniform sampler for R_G(n,d) that picks a method once.
///
/// kAuto: complete graph if d is maximal; rejection if a fixed pilot run
/// sees P(simple) >= 1%; otherwise an exact completion table (built on the
/// complementary degree binom(n-1,k-1) - d when G is empty and that is
/// smaller); rejection again if the table does not fit.
class RegularSampler {
 public:
  enum class Method { kAuto, kRejection, kTable, kComplete };

  RegularSampler(const OrderedHypergraph& G, const Params& params, Method method = Method::kAuto,
                 std::uint64_t table_states = 20'000'000);
  ~RegularSampler();
  RegularSampler(RegularSampler&&) noexcept;
  RegularSampler& operator=(RegularSampler&&) noexcept;

  Method method() const { return method_; }
  bool uses_complement() const { return complement_; }
  OrderedHypergraph sample(Rng& rng) const;

 private:
  OrderedHypergraph base_;
  Params params_;
  Method method_ = Method::kRejection;
  bool complement_ = false;
  std::uint64_t max_attempts_ = 0;
  std::unique_ptr<CompletionTable> table_;
};

const char* to_string(RegularSampler::Method method);

}  // namespace hypercouple

#pragma once

// Memoized count of completion sets, for exact uniform sampling of d-regular
// completions when rejection from the configuration model is hopeless.
//
// Candidate edges are scanned in lexicographic order; a state is the scan
// position plus the residual degree vector, packed into one 64-bit key.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hypercouple/core.hpp"
#include "hypercouple/rng.hpp"

namespace hypercouple {

class CompletionTable {
 public:
  /// Throws kTooLarge when the state key does not fit 64 bits, a count
  /// overflows, or more than max_states states are needed.
  static CompletionTable build(const OrderedHypergraph& G, const Params& params,
                               std::uint64_t max_states = 20'000'000);

  /// Number of unordered completion sets.
  std::uint64_t count() const { return count_; }
  std::size_t states() const { return memo_.size(); }
  const Params& params() const { return params_; }

  /// A uniformly random completion set, sorted. Throws kInadmissible if count() == 0.
  std::vector<Edge> sample(Rng& rng) const;
  /// G followed by a uniform completion in uniformly random order.
  OrderedHypergraph sample_ordered(Rng& rng) const;

 private:
  CompletionTable() = default;

  std::uint64_t pack(std::size_t i, const std::vector<int>& r) const;
  std::uint64_t value(std::size_t i, std::vector<int>& r);
  std::uint64_t lookup(std::size_t i, const std::vector<int>& r) const;
  bool pruned(std::size_t i, const std::vector<int>& r) const;

  Params params_;
  OrderedHypergraph base_;
  std::vector<Edge> candidates_;
  std::vector<int> initial_;
  std::vector<std::vector<int>> remaining_;  // remaining_[i][v]: candidates >= i containing v
  int index_bits_ = 0;
  int residual_bits_ = 0;
  std::uint64_t max_states_ = 0;
  std::uint64_t count_ = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

}  // namespace hypercouple

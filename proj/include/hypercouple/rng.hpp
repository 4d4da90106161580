#pragma once

// Deterministic random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the standard.
// Each (seed, stream, substream) triple is mixed through SplitMix64 into the
// engine seed. Bounded integers use rejection on the top bits and doubles use
// the top 53 bits, so draws are identical on every platform (the standard
// library distributions are not).

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace hypercouple {

/// Identifies one independent stream: a run seed plus a trial index.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Child stream for an independent purpose within one trial.
  RngStream substream(std::uint64_t tag) const;
};

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(RngStream id);
  Rng(std::uint64_t seed, std::uint64_t stream) : Rng(RngStream{seed, stream}) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hypercouple

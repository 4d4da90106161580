#pragma once

// l-overlapping Hamilton cycles in k-graphs.
//
// A certificate is a cyclic vertex order; its edges are the k-windows that
// start at positions o, o + s, o + 2s, ... (mod n) with stride s = k - l and
// offset 0 <= o < s.

#include <cstdint>
#include <optional>
#include <vector>

#include "hypercouple/core.hpp"
#include "hypercouple/rng.hpp"
#include "hypercouple/stats.hpp"

namespace hypercouple {

struct CycleCertificate {
  std::vector<Vertex> order;
  int k = 0;
  int ell = 0;
  int offset = 0;

  int stride() const { return k - ell; }
  /// The n / (k - l) window edges, in cyclic order.
  std::vector<Edge> edges() const;
  friend bool operator==(const CycleCertificate&, const CycleCertificate&) = default;
};

/// Throws kDomain unless 1 <= l <= k-1 and (k - l) | n.
void check_cycle_shape(int n, int k, int ell);

/// (k - l) | n and n >= 2k - l: windows are distinct and consecutive ones
/// share exactly l vertices. Smaller n admits no l-cycle at all.
bool cycle_shape_feasible(int n, int k, int ell);

/// True iff every window edge of cert lies in H. Throws kDomain if cert is
/// not a permutation of [1, n] with a feasible shape.
bool verify_cycle(const Hypergraph& H, const CycleCertificate& cert);

/// Same window edges, rotated so the order starts at vertex 1; of the two
/// directions, the lexicographically smaller order wins.
CycleCertificate canonical_form(const CycleCertificate& cert);

enum class HamVerdict { kFound, kNone, kUnknown };
const char* to_string(HamVerdict verdict);

struct HamiltonResult {
  HamVerdict verdict = HamVerdict::kNone;
  std::optional<CycleCertificate> cycle;
  std::uint64_t nodes = 0;
};

/// Backtracking with vertex 1 at position 0, each window offset tried,
/// subset-of-an-edge pruning on partial windows, and reflection symmetry
/// broken when s = 1. More than node_budget nodes gives kUnknown.
HamiltonResult find_hamilton_cycle(const Hypergraph& H, int ell, std::uint64_t node_budget = 10'000'000);

struct SweepRow {
  int d = 0;
  std::uint64_t trials = 0;
  std::uint64_t ham = 0;
  std::uint64_t none = 0;
  std::uint64_t unknown = 0;
  double p_hat = 0.0;  // ham / trials
  Interval ci;
  const char* sampler = "";
};

/// For each d, samples R(n,d) per trial from stream (seed, trial) and
/// substream d, then runs the finder.
std::vector<SweepRow> hamiltonicity_sweep(int n, int k, int ell, const std::vector<int>& d_values,
                                          std::uint64_t trials, std::uint64_t seed,
                                          std::uint64_t node_budget = 10'000'000, int jobs = 1);

}  // namespace hypercouple

#pragma once

// Degree-preserving switchings on k-graphs and the bipartite double count
// between adjacent families of completions.
//
// A move is a k x k vertex matrix: row i is a removed edge e_i, column j is
// the added edge f_j. Families are handled as unordered completion sets;
// every ordered family is (M - t)! times larger, so ratios and the double
// counting identity are the same either way.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypercouple/core.hpp"
#include "hypercouple/exact_enum.hpp"
#include "hypercouple/rng.hpp"
#include "hypercouple/stats.hpp"

namespace hypercouple {

enum class SwitchKind {
  kRemoveEdge,  // R_{e in} -> R_{e notin}
  kPairDegree,  // deg_{H\G}(u,v) = l -> l-1
  kCodegree,    // cod_{H|G}(u,v) = l -> l-1
};

const char* to_string(SwitchKind kind);

struct SwitchingMove {
  /// matrix[i][j] = v_{i+1, j+1}.
  std::vector<std::vector<Vertex>> matrix;

  int k() const { return static_cast<int>(matrix.size()); }
  std::vector<Edge> removed() const;
  std::vector<Edge> added() const;
  /// The transpose; applying it to the image restores the original graph.
  SwitchingMove inverse() const;

  /// Rows in the given order, each labeled increasingly; if lead is set it
  /// is moved to the front of row 0 (the codegree labeling v = v_{1,1}).
  static SwitchingMove from_rows(const std::vector<Edge>& rows, std::optional<Vertex> lead = std::nullopt);
};

/// Empty when the move can be applied to H, else the violated clause.
std::optional<std::string> switch_violation(const Hypergraph& H, const SwitchingMove& move);

/// H' = (H \ removed) + added. Throws kIllegalSwitch with the violated clause.
Hypergraph apply_switch(const Hypergraph& H, const SwitchingMove& move);

struct SwitchTarget {
  SwitchKind kind = SwitchKind::kRemoveEdge;
  Edge e;         // kRemoveEdge
  Vertex u = 0;   // class kinds
  Vertex v = 0;
};

/// Statistic that indexes the classes: [e in H] for kRemoveEdge, else the
/// pair degree over H \ G or cod_{H|G}(u, v).
int switch_statistic(const Hypergraph& H, const Hypergraph& G, const SwitchTarget& target);

/// Whether move is a legal switching of the target's kind from H: labeling,
/// rows in H \ G, no double edge, the kind's choice of e_1, and (codegree)
/// the exclusion (f_1 \ v) + u notin H plus an exact drop of the statistic.
bool is_legal_move(const Hypergraph& H, const Hypergraph& G, const SwitchTarget& target,
                   const SwitchingMove& move);

/// Distinct graphs reachable from H by one legal move.
std::vector<Hypergraph> forward_images(const Hypergraph& H, const Hypergraph& G, const SwitchTarget& target);
std::uint64_t forward_count(const Hypergraph& H, const Hypergraph& G, const SwitchTarget& target);

/// Distinct graphs H with a legal move H -> H2, reconstructed from columns of H2.
std::vector<Hypergraph> backward_preimages(const Hypergraph& H2, const Hypergraph& G, const SwitchTarget& target);
std::uint64_t backward_count(const Hypergraph& H2, const Hypergraph& G, const SwitchTarget& target);

struct DoubleCountingReport {
  SwitchTarget target;
  int ell = 0;  // class index of the source family (1 for kRemoveEdge)
  std::uint64_t source_size = 0;  // unordered
  std::uint64_t target_size = 0;
  std::uint64_t edges_forward = 0;   // sum of f over the source family
  std::uint64_t edges_backward = 0;  // sum of b over the target family
  std::uint64_t min_f = 0, max_f = 0, min_b = 0, max_b = 0;
  bool identity_ok = false;
  bool sandwich_ok = false;
  bool images_in_target = true;  // every forward image is a target-family member

  // Advisory counting bounds, evaluated with tau = 1 - t/M.
  bool degG_holds = false;  // r_G(v) <= 2 tau d for all v
  double f_lower_bound = 0.0;
  double b_upper_bound = 0.0;
  bool f_bound_ok = true;
  bool b_bound_ok = true;
};

/// Enumerates both families and the full bipartite graph B between them.
DoubleCountingReport double_counting(const OrderedHypergraph& G, const Params& params,
                                     const SwitchTarget& target, int ell = 1,
                                     WorkBound bound = WorkBound::from_env());

/// Reports for every class step 1..L of a class kind (a single report for kRemoveEdge).
std::vector<DoubleCountingReport> double_counting_all(const OrderedHypergraph& G, const Params& params,
                                                      const SwitchTarget& target,
                                                      WorkBound bound = WorkBound::from_env());

struct SwitchingConstants {
  double C0 = 1.0;
  double C1 = 1.0;
  double C2 = 1.0;
};

struct EdgeProbabilityEstimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  Interval ci;
  double scale = 0.0;         // tau d / n^{k-1}
  double empirical_C0 = 0.0;  // estimate / scale
  std::optional<double> exact;
};

EdgeProbabilityEstimate edge_probability(const OrderedHypergraph& G, const Edge& e, const Params& params,
                                         std::uint64_t trials, Rng& rng);

struct TailEstimate {
  SwitchStatistic statistic = SwitchStatistic::kPairDegree;
  double ell1 = 0.0;  // C1 tau d / n
  double ell2 = 0.0;  // C2 tau d^2 / n^{k-1}
  std::uint64_t trials = 0;
  std::map<int, double> empirical_tail;  // l -> P(statistic > l)
  std::map<int, double> exact_tail;      // when the oracle fits
  std::map<int, double> class_ratios;    // l -> |R(l)| / |R(l-1)|, exact
  bool monotone = true;
  /// Every ratio at l >= threshold is < 1 (threshold: ell1 or ell2).
  bool decays_above_threshold = true;
  /// Every ratio at l >= threshold is <= 1/2; reported, not asserted.
  bool halving_above_threshold = true;
};

TailEstimate tail_profile(const OrderedHypergraph& G, Vertex u, Vertex v, SwitchStatistic statistic,
                          const Params& params, std::uint64_t trials, Rng& rng,
                          SwitchingConstants constants = {});

}  // namespace hypercouple

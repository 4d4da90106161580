#pragma once

// Brute-force ground truth at desk scale.
//
// Families of extensions are ordered (a completion's edges may come in any
// order after the prefix), but the search enumerates unordered completion
// sets and multiplies by (M - t)! afterwards. Both counts are reported.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "hypercouple/core.hpp"

namespace hypercouple {

/// Cap on explored search nodes. Exceeding it raises kTooLarge; results are
/// never silently truncated.
struct WorkBound {
  std::uint64_t max_nodes = 100'000'000;

  /// Default bound, overridden by HYPERCOUPLE_NODE_BUDGET when set.
  static WorkBound from_env();
};

mpz_class factorial(unsigned long n);

struct ExtensionFamily {
  OrderedHypergraph base;
  Params params;
  /// False when some deg_G(v) exceeds d or |G| > M (count is then 0).
  bool degree_feasible = true;
  bool admissible = false;
  mpz_class unordered_count = 0;
  mpz_class ordered_count = 0;
  /// Completion edge sets (each sorted), filled when listing was requested.
  std::vector<std::vector<Edge>> completions;
  bool listed = false;
  std::uint64_t nodes = 0;
};

ExtensionFamily count_extensions(const OrderedHypergraph& G, const Params& params, bool list = false,
                                 WorkBound bound = WorkBound::from_env());

/// Visits every unordered completion set of G (edges sorted). Returns nodes explored.
std::uint64_t for_each_completion(const OrderedHypergraph& G, const Params& params,
                                  const std::function<void(std::span<const Edge>)>& visit,
                                  WorkBound bound = WorkBound::from_env());

/// Exact law of the next edge of the regular process given R(t) = G.
struct NextEdgeDistribution {
  int t = 0;
  std::uint64_t complement_size = 0;  // binom(n, k) - t
  std::vector<Edge> edges;            // K_n \ G, lexicographic
  std::vector<mpz_class> completions_with;  // completion sets of G containing e
  mpz_class completions = 0;                // completion sets of G
  std::vector<mpq_class> probability;

  /// min_e p(e) * (binom(n, k) - t).
  mpq_class min_ratio() const;
  mpq_class max_ratio() const;
  std::vector<double> probabilities_as_double() const;
};

/// Throws kInadmissible if G has no completion, kDomain if t = M.
NextEdgeDistribution exact_next_edge_distribution(const OrderedHypergraph& G, const Params& params,
                                                  WorkBound bound = WorkBound::from_env());

enum class SwitchStatistic { kPairDegree, kCodegree };

/// Partition of R_G(n,d) (ordered counts) by deg_{H\G}(u,v) or cod_{H|G}(u,v).
struct SwitchingClassSizes {
  SwitchStatistic statistic = SwitchStatistic::kPairDegree;
  std::map<int, mpz_class> sizes;
  int L = -1;

  mpz_class total() const;
  /// Nonempty classes are exactly 0..L.
  bool is_interval() const;
};

SwitchingClassSizes switching_class_sizes(const OrderedHypergraph& G, Vertex u, Vertex v,
                                          SwitchStatistic statistic, const Params& params,
                                          WorkBound bound = WorkBound::from_env());

/// Configuration-model permutations of the residual multiset of G, counted
/// by direct enumeration of multiset permutations (loops pruned early).
struct PermutationCount {
  mpz_class simple = 0;
  mpz_class total = 0;  // N_G, the multinomial coefficient
  std::uint64_t nodes = 0;

  mpq_class simple_probability() const;
};

/// N_G = (k(M-t))! / prod_v r_G(v)!.
mpz_class configuration_count(const OrderedHypergraph& G, const Params& params);

PermutationCount count_simple_permutations(const OrderedHypergraph& G, const Params& params,
                                           WorkBound bound = WorkBound::from_env());

/// |R_e| / |R_f| against (prod_{e\f} r_G / prod_{f\e} r_G) * P(M_e simple) / P(M_f simple).
struct RatioIdentityReport {
  Edge e;
  Edge f;
  mpz_class count_e = 0;  // ordered |R_{G+e}|
  mpz_class count_f = 0;
  mpq_class residual_ratio = 0;
  mpq_class simple_probability_e = 0;
  mpq_class simple_probability_f = 0;
  mpq_class lhs = 0;
  mpq_class rhs = 0;
  bool equal = false;
};

/// Requires G + f admissible (the ratio is otherwise undefined).
RatioIdentityReport verify_ratio_identity(const OrderedHypergraph& G, const Edge& e, const Edge& f,
                                          const Params& params, WorkBound bound = WorkBound::from_env());

/// G with one edge appended.
OrderedHypergraph appended(const OrderedHypergraph& G, const Edge& e);

}  // namespace hypercouple

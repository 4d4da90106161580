#pragma once

// The regular edge-exposure process, the near-uniformity events A_t, and the
// step-by-step coupling of the uniform edge process G(t) with R(t).

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "hypercouple/core.hpp"
#include "hypercouple/exact_enum.hpp"
#include "hypercouple/rng.hpp"
#include "hypercouple/samplers.hpp"
#include "hypercouple/stats.hpp"
#include "hypercouple/switchings.hpp"

namespace hypercouple {

/// How p_{t+1}(.|G) is obtained: exact enumeration, or Monte Carlo over
/// uniformly sampled completions.
struct PMode {
  bool exact = true;
  std::uint64_t mc_trials = 0;

  /// "exact" or "mc:<trials>"; throws kInvalidConfig otherwise.
  static PMode parse(std::string_view text);
  std::string to_string() const;
};

struct CouplingConfig {
  Params params;
  double gamma = 0.0;
  /// epsilon = eps_num / M, so (1 - epsilon) M is an integer.
  int eps_num = 0;
  int m = 0;      // (1 - gamma) M
  int steps = 0;  // (1 - epsilon) M
  PMode p_mode;

  double epsilon() const { return static_cast<double>(eps_num) / params.M; }
  mpq_class epsilon_exact() const { return mpq_class(eps_num, params.M); }

  /// Validates gamma in (0, 1) with (1 - gamma) M integral. Without an
  /// explicit epsilon, picks the largest j / M <= gamma / 3. An explicit
  /// epsilon must make (1 - epsilon) M integral and satisfy epsilon <= gamma / 3.
  static CouplingConfig make(const Params& params, double gamma, std::optional<double> epsilon = std::nullopt,
                             PMode p_mode = {});
};

/// Largest j >= 1 with j / M <= gamma / 3; throws kInvalidConfig if none.
int choose_epsilon_numerator(int M, double gamma);

/// The next-edge law at one state, with what the coupling needs from it.
struct NextEdgeLaw {
  int t = 0;
  std::vector<Edge> edges;  // K_n \ G, lexicographic
  /// Exact mode: integer weights proportional to p (completion counts).
  /// MC mode: containment counts over the sampled completions.
  std::vector<std::uint64_t> weights;
  std::vector<double> p;
  double min_ratio = 0.0;  // min_e p(e) (binom(n,k) - t)
  std::optional<mpq_class> min_ratio_exact;
  /// MC mode: confidence interval of min_ratio from per-edge Wilson intervals.
  Interval min_ratio_ci{0.0, 0.0};
  bool exact = true;
};

/// Supplies next-edge laws, caching them per unordered state. Thread safe.
class NextEdgeOracle {
 public:
  NextEdgeOracle(const Params& params, PMode mode, std::uint64_t seed = 0,
                 WorkBound bound = WorkBound::from_env());

  const Params& params() const { return params_; }
  const PMode& mode() const { return mode_; }
  std::shared_ptr<const NextEdgeLaw> law(const OrderedHypergraph& G);
  std::size_t cached_states() const;

 private:
  std::shared_ptr<const NextEdgeLaw> compute(const OrderedHypergraph& G) const;

  Params params_;
  PMode mode_;
  std::uint64_t seed_;
  WorkBound bound_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const NextEdgeLaw>> cache_;
};

struct AtVerdict {
  bool holds = false;
  double min_ratio = 0.0;
  /// MC mode only: the verdict would flip somewhere inside the interval.
  bool uncertain = false;
};

/// min_e p_{t+1}(e|G) (binom(n,k) - t) >= 1 - epsilon. Exact mode decides in
/// rational arithmetic.
AtVerdict check_A_t(const NextEdgeLaw& law, const CouplingConfig& config);
AtVerdict check_A_t(const OrderedHypergraph& G, const CouplingConfig& config, NextEdgeOracle& oracle);

enum class Branch { kFresh, kBijection, kZeta, kDirect, kTail };
const char* to_string(Branch branch);

struct CouplingStep {
  int t = 0;  // the step produces edge t + 1
  bool xi = false;
  std::optional<Edge> eps;  // absent after the coupled phase
  bool A_t = false;
  bool uncertain = false;
  Branch branch = Branch::kTail;
  Edge eta;
};

struct CouplingTrace {
  std::vector<CouplingStep> steps;
  OrderedHypergraph G_process;  // eps_1 .. eps_steps
  OrderedHypergraph R;          // R'(M)
  std::vector<Edge> S;
  std::vector<Edge> embedded;   // the m-edge graph
  bool A_all = true;
  bool S_big_enough = false;    // |S| >= m
  bool contained = false;
  bool uncertain = false;
};

/// The lexicographically monotone bijection sorted(R \ G) -> sorted(G \ R).
Edge monotone_bijection(const Hypergraph& R, const Hypergraph& G, const Edge& e);

/// One coupled trace. Substreams of `stream`: 0 eps, 1 xi, 2 eta'/zeta.
CouplingTrace run_coupling(const CouplingConfig& config, NextEdgeOracle& oracle, RngStream stream);

struct GnpTrace {
  CouplingTrace coupling;
  double p = 0.0;
  std::uint64_t B = 0;  // B_n ~ Bin(binom(n,k), p), substream 3
  std::vector<Edge> gnp_edges;
  bool from_S = false;  // B <= m <= |S|
  bool B_gt_m = false;
  bool S_lt_m = false;
  bool contained = false;
};

/// Default p = (1 - 2 gamma) d / binom(n-1, k-1).
double default_gnp_p(const CouplingConfig& config);

/// Off the good event, the B-edge graph comes from substream 4.
GnpTrace run_coupling_gnp(const CouplingConfig& config, double p, NextEdgeOracle& oracle, RngStream stream);

struct SSizeReport {
  std::uint64_t traces = 0;
  int trials_per_trace = 0;  // (1 - epsilon) M
  double q = 0.0;            // 1 - epsilon
  double mean = 0.0;
  double variance = 0.0;
  double expected_mean = 0.0;      // (1 - eps)^2 M
  double expected_variance = 0.0;  // (1 - eps)^2 eps M
  double mean_z = 0.0;
  double variance_z = 0.0;
  bool mean_ok = false;      // |z| <= 3
  bool variance_ok = false;  // |z| <= 3
  std::uint64_t below_m = 0;
  double p_below_m = 0.0;
  Interval p_below_m_ci;
  double p_below_m_binomial = 0.0;  // exact binomial value
  double chebyshev_bound = 0.0;     // k / (eps n d)
  bool chebyshev_ok = false;        // p_hat <= bound + 3 * MC error
};

SSizeReport s_size_diagnostics(const CouplingConfig& config, std::span<const std::size_t> s_sizes);

/// Uniform ordered R(n,d) and its residual-degree trajectories X_t(v).
struct ProcessTrajectory {
  OrderedHypergraph R;
  /// X[t][v] for t = 0..M, v = 1..n (index 0 unused).
  std::vector<std::vector<int>> X;
};

ProcessTrajectory expose_process(const Params& params, const RegularSampler& sampler, Rng& rng);
ProcessTrajectory expose_process(const Params& params, Rng& rng);

/// The lexicographically least f maximizing |R_{G+f}| (any such f has p >= average).
Edge choose_probe_f(const OrderedHypergraph& G, const Params& params, WorkBound bound = WorkBound::from_env());

struct NicenessReport {
  Edge e;
  Edge f;
  int s = 0;  // k - |e cap f|
  std::uint64_t trials = 0;
  std::uint64_t degenerate = 0;  // some v_i has residual 0: e cannot be added
  std::uint64_t f_simple = 0;
  std::uint64_t e_simple = 0;
  std::uint64_t nice = 0;            // f simple and nice
  std::uint64_t e_simple_given_nice = 0;
  std::uint64_t nice1 = 0, nice2 = 0, nice3 = 0;  // among f-simple samples
  std::array<std::uint64_t, 4> events{};          // E1..E4 among nice samples
  std::array<double, 4> event_bounds{};           // mean per-H union bounds among nice samples
  /// f simple, e notin H, e not simple, and none of E1..E4: must stay 0.
  std::uint64_t invariant_violations = 0;
  Interval e_simple_ci;
  Interval f_simple_ci;
  double ratio_estimate = 0.0;  // P(e simple) / P(f simple)
  std::optional<mpq_class> ratio_exact;
};

NicenessReport mutual_simplicity_probe(const OrderedHypergraph& G, const Edge& e, const Edge& f,
                                       const Params& params, std::uint64_t trials, Rng& rng,
                                       SwitchingConstants constants = {}, bool with_exact = true);

}  // namespace hypercouple

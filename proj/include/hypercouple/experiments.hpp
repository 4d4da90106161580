#pragma once

// Batch experiment runner: one config in, deterministic data files out.
//
// Every trial i draws from RngStream{seed, i}; results land in per-trial
// slots and are reduced in trial order, so outputs are byte-identical for
// any --jobs. Files are written to <path>.tmp and renamed into place. The
// manifest (config echo, stream scheme, wall clock, SHA-256 digests) is the
// only file that carries timing.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypercouple/core.hpp"
#include "hypercouple/coupling.hpp"

namespace hypercouple {

inline constexpr int kSchemaVersion = 1;

enum class ExperimentKind {
  kSample,
  kCouple,
  kCoupleGnp,
  kProcessStats,
  kSwitchingVerify,
  kHamiltonSweep,
  kOracleDump,
  kValidateParams,
};

const char* to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& text);

enum class OutputFormat { kCsv, kJson };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSample;
  int n = 0;
  int k = 0;
  int d = 0;

  // sample
  std::string model = "regular";  // gnm | gnp | regular
  std::optional<std::uint64_t> m;
  std::optional<double> p;

  // couple, couple-gnp, validate-params
  double gamma = 0.0;
  std::optional<double> epsilon;
  PMode p_mode;
  bool step_log = false;  // couple: also write steps.csv
  double C = 1.0;         // validate-params

  // process-stats
  std::vector<int> t_grid;  // empty: every t
  std::vector<int> v_grid;  // empty: every vertex

  // switching-verify, oracle-dump
  std::string graph_path;  // prefix G as an edge list; empty for G = {}
  Vertex u = 1;
  Vertex v = 2;
  std::string switch_kind = "all";  // remove | pair | codegree | all
  std::optional<Edge> e;            // remove: the edge to take out

  // hamilton-sweep
  int ell = 0;
  std::vector<int> d_list;
  std::uint64_t node_budget = 10'000'000;

  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  int jobs = 1;
  std::string out_dir = ".";
  OutputFormat format = OutputFormat::kCsv;

  /// Throws kInvalidConfig on unknown keys, wrong types, or bad values.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct RunManifest {
  nlohmann::json config;
  std::string code_version;
  nlohmann::json streams;
  double wall_seconds = 0.0;
  std::map<std::string, std::string> digests;  // file name -> SHA-256 hex
  nlohmann::json summary;
  std::uint64_t failed_trials = 0;

  nlohmann::json to_json() const;
};

/// Runs the experiment, writes its files into config.out_dir plus
/// manifest.json, and returns the manifest. Invalid configs throw
/// kInvalidConfig; failing trials are logged to errors.log and the first
/// failure is rethrown after the log is written.
RunManifest run_experiment(const ExperimentConfig& config);

// ---------------------------------------------------------------- helpers

std::string sha256_hex(const std::string& bytes);

/// Writes path.tmp and renames it over path.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Shortest round-trip decimal form; identical on every platform.
std::string format_double(double x);

/// A rectangular table rendered as CSV or as a JSON array of records.
/// CSV cells: booleans as 0/1, floats in shortest round-trip form.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  std::string to_csv() const;
  std::string to_json() const;
};

/// Advisory check of the gamma condition for one (n, k, d, gamma, C).
struct GammaReport {
  int n = 0, k = 0, d = 0;
  double gamma = 0.0;
  double C = 0.0;
  double root_term = 0.0;  // (d / n^{k-1} + ln n / d)^{1/3}
  double lhs = 0.0;        // C (root_term + 1/n)
  double lhs_without_1_over_n = 0.0;
  bool gamma_below_one = false;
  bool feasible = false;   // lhs <= gamma < 1
  bool feasible_without_1_over_n = false;
  bool small_k_remark = false;  // k <= 7: 1/n is dominated by root_term
  bool amgm_holds = false;      // root_term >= 1/n
  double epsilon_max = 0.0;     // gamma / 3
  std::optional<int> epsilon_numerator;  // largest j / M <= gamma / 3
  std::optional<int> m;                  // (1 - gamma) M when integral
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

GammaReport validate_gamma_epsilon(int n, int k, int d, double gamma, double C);

/// Per-step check of the coupled R'(t) against the exact next-edge law on the
/// `top` most visited states (ties broken by state key).
struct EtaLawCheck {
  std::string state;  // sorted edge list
  int t = 0;
  std::uint64_t visits = 0;
  double chi2_p = 1.0;
  double tv = 0.0;
  std::uint64_t impossible = 0;
};

std::vector<EtaLawCheck> eta_law_checks(const std::vector<OrderedHypergraph>& finals, NextEdgeOracle& oracle,
                                        std::size_t top);

/// TV distance and chi-square of the unordered law of `finals` against
/// uniform over the completion family of the empty prefix.
struct UniformityCheck {
  std::uint64_t family_size = 0;
  std::uint64_t samples = 0;
  double tv = 0.0;
  double chi2_p = 1.0;
  std::uint64_t outside_family = 0;
};

UniformityCheck uniformity_check(const std::vector<OrderedHypergraph>& finals, const Params& params,
                                 WorkBound bound = WorkBound::from_env());

}  // namespace hypercouple

#include "hypercouple/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "hypercouple/edge_list.hpp"
#include "hypercouple/error.hpp"
#include "hypercouple/hamilton.hpp"
#include "hypercouple/parallel.hpp"
#include "hypercouple/samplers.hpp"
#include "hypercouple/stats.hpp"
#include "hypercouple/switchings.hpp"

#ifndef HYPERCOUPLE_VERSION
#define HYPERCOUPLE_VERSION "unknown"
#endif

namespace hypercouple {

using nlohmann::json;

namespace {

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::kSample, "sample"},
    {ExperimentKind::kCouple, "couple"},
    {ExperimentKind::kCoupleGnp, "couple-gnp"},
    {ExperimentKind::kProcessStats, "process-stats"},
    {ExperimentKind::kSwitchingVerify, "switching-verify"},
    {ExperimentKind::kHamiltonSweep, "hamilton-sweep"},
    {ExperimentKind::kOracleDump, "oracle-dump"},
    {ExperimentKind::kValidateParams, "validate-params"},
};

std::string edges_text(const std::vector<Edge>& edges) {
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out += ' ';
    out += edges[i].to_string();
  }
  return out;
}

std::string edge_cell(const Edge& e) {
  std::string out;
  for (Vertex v : e) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  }
  return out;
}

json interval_json(const Interval& ci) { return json::array({ci.lo, ci.hi}); }

json rate_json(std::uint64_t hits, std::uint64_t trials) {
  return {{"count", hits},
          {"rate", trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0},
          {"ci95", interval_json(wilson_interval(hits, trials))}};
}

// Validation failures surface as kInvalidConfig whatever layer raised them.
template <class Fn>
auto as_config_error(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDomain || e.code() == ErrorCode::kInadmissible)
      throw Error(ErrorCode::kInvalidConfig, e.what());
    throw;
  }
}

struct TrialFailure {
  ErrorCode code;
  std::string message;
};

// Runs fn(i) over all trials, collecting per-trial failures instead of
// aborting at the first one.
template <class Fn>
std::vector<std::optional<TrialFailure>> run_trials(const ExperimentConfig& c, Fn&& fn) {
  std::vector<std::optional<TrialFailure>> failures(c.trials);
  parallel_for(c.trials, c.jobs, [&](std::size_t i) {
    try {
      fn(i);
    } catch (const Error& e) {
      failures[i] = TrialFailure{e.code(), e.what()};
    } catch (const std::exception& e) {
      failures[i] = TrialFailure{ErrorCode::kInternal, e.what()};
    }
  });
  return failures;
}

OrderedHypergraph load_prefix(const ExperimentConfig& c) {
  if (c.graph_path.empty()) return OrderedHypergraph(c.n, c.k);
  auto doc = load_edge_list(c.graph_path);
  require(doc.graph.n() == c.n && doc.graph.k() == c.k, ErrorCode::kInvalidConfig,
          "graph file header does not match --n/--k");
  return doc.graph;
}

struct Output {
  std::map<std::string, std::string> files;
  json summary;
  std::uint64_t failed = 0;
  std::optional<TrialFailure> first_failure;
  std::string error_log;
};

void add_table(Output& out, const ExperimentConfig& c, const std::string& stem, const Table& table) {
  if (c.format == OutputFormat::kCsv) out.files[stem + ".csv"] = table.to_csv();
  else out.files[stem + ".json"] = table.to_json();
}

void absorb_failures(Output& out, const std::vector<std::optional<TrialFailure>>& failures) {
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) continue;
    ++out.failed;
    if (!out.first_failure) out.first_failure = failures[i];
    out.error_log += "trial " + std::to_string(i) + ": " + failures[i]->message + "\n";
  }
}

// ---------------------------------------------------------------- kinds

Output run_sample(const ExperimentConfig& c) {
  Output out;
  std::vector<OrderedHypergraph> graphs(c.trials);
  std::optional<RegularSampler> sampler;
  std::optional<Params> params;
  if (c.model == "regular") {
    params = Params::make(c.n, c.k, c.d);
    sampler.emplace(OrderedHypergraph(c.n, c.k), *params);
  }
  const auto failures = run_trials(c, [&](std::size_t i) {
    Rng rng(RngStream{c.seed, i});
    if (c.model == "regular") {
      graphs[i] = sampler->sample(rng);
    } else if (c.model == "gnm") {
      graphs[i] = sample_gnm(c.n, c.k, *c.m, rng);
    } else {
      const auto H = sample_gnp(c.n, c.k, *c.p, rng);
      const auto edges = H.sorted_edges();
      graphs[i] = OrderedHypergraph(c.n, c.k, edges);
    }
  });
  absorb_failures(out, failures);
  std::string text;
  std::vector<double> sizes;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (failures[i]) continue;
    text += to_edge_list(graphs[i], c.model == "regular" ? std::optional<int>(c.d) : std::nullopt);
    sizes.push_back(static_cast<double>(graphs[i].size()));
  }
  out.files["samples.edges"] = text;
  const auto mom = moments(sizes);
  out.summary = {{"model", c.model}, {"samples", sizes.size()}, {"edge_count_mean", mom.mean},
                 {"edge_count_variance", mom.variance}};
  if (sampler) out.summary["sampler"] = to_string(sampler->method());
  return out;
}

struct CoupleSlot {
  CouplingTrace trace;
  std::optional<GnpTrace> gnp;
};

json tv_checks_json(const ExperimentConfig& c, const CouplingConfig& cc, NextEdgeOracle& oracle,
                    const std::vector<OrderedHypergraph>& finals) {
  json checks = json::object();
  if (!c.p_mode.exact) {
    checks["skipped"] = "exact next-edge law unavailable in monte carlo mode";
    return checks;
  }
  try {
    const auto u = uniformity_check(finals, cc.params);
    checks["uniformity"] = {{"family_size", u.family_size}, {"samples", u.samples}, {"tv", u.tv},
                            {"chi2_p", u.chi2_p}, {"outside_family", u.outside_family}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTooLarge) throw;
    checks["uniformity"] = {{"skipped", e.what()}};
  }
  json laws = json::array();
  for (const auto& chk : eta_law_checks(finals, oracle, 10))
    laws.push_back({{"state", chk.state}, {"t", chk.t}, {"visits", chk.visits}, {"chi2_p", chk.chi2_p},
                    {"tv", chk.tv}, {"impossible", chk.impossible}});
  checks["eta_law"] = laws;
  return checks;
}

Output run_couple(const ExperimentConfig& c, bool gnp) {
  Output out;
  const auto params = Params::make(c.n, c.k, c.d);
  const auto cc = CouplingConfig::make(params, c.gamma, c.epsilon, c.p_mode);
  const double p = gnp ? c.p.value_or(default_gnp_p(cc)) : 0.0;
  NextEdgeOracle oracle(params, c.p_mode, c.seed);
  std::vector<CoupleSlot> slots(c.trials);
  const auto failures = run_trials(c, [&](std::size_t i) {
    const RngStream stream{c.seed, i};
    if (gnp) {
      auto g = run_coupling_gnp(cc, p, oracle, stream);
      slots[i].trace = g.coupling;
      slots[i].gnp = std::move(g);
    } else {
      slots[i].trace = run_coupling(cc, oracle, stream);
    }
  });
  absorb_failures(out, failures);

  Table traces;
  traces.columns = {"trace", "A_all", "S_size", "S_big_enough", "contained", "uncertain"};
  if (gnp) {
    for (const char* col : {"B", "from_S", "B_gt_m", "gnp_contained"}) traces.columns.push_back(col);
  }
  Table steps;
  steps.columns = {"trace", "t", "xi", "eps", "A_t", "uncertain", "branch", "eta"};

  std::uint64_t done = 0, contained = 0, a_all = 0, s_lt_m = 0, uncertain = 0, exceptions = 0;
  std::uint64_t gnp_contained = 0, from_s = 0, b_gt_m = 0, gnp_failures_unexplained = 0;
  std::vector<std::size_t> s_sizes;
  std::vector<OrderedHypergraph> finals;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (failures[i]) continue;
    const auto& tr = slots[i].trace;
    ++done;
    contained += tr.contained;
    a_all += tr.A_all;
    s_lt_m += !tr.S_big_enough;
    uncertain += tr.uncertain;
    if (tr.A_all && tr.S_big_enough && !tr.contained) ++exceptions;
    s_sizes.push_back(tr.S.size());
    finals.push_back(tr.R);
    std::vector<json> row = {i, tr.A_all, tr.S.size(), tr.S_big_enough, tr.contained, tr.uncertain};
    if (gnp) {
      const auto& g = *slots[i].gnp;
      gnp_contained += g.contained;
      from_s += g.from_S;
      b_gt_m += g.B_gt_m;
      if (!g.contained && tr.A_all && !g.B_gt_m && !g.S_lt_m) ++gnp_failures_unexplained;
      for (json v : {json(g.B), json(g.from_S), json(g.B_gt_m), json(g.contained)}) row.push_back(v);
    }
    traces.rows.push_back(std::move(row));
    if (c.step_log) {
      for (const auto& st : tr.steps)
        steps.rows.push_back({i, st.t, st.xi, st.eps ? edge_cell(*st.eps) : std::string(), st.A_t, st.uncertain,
                              to_string(st.branch), edge_cell(st.eta)});
    }
  }
  add_table(out, c, "traces", traces);
  if (c.step_log) add_table(out, c, "steps", steps);

  const auto s = s_size_diagnostics(cc, s_sizes);
  json summary = {
      {"traces", done},
      {"M", params.M},
      {"m", cc.m},
      {"epsilon", cc.epsilon()},
      {"epsilon_numerator", cc.eps_num},
      {"steps", cc.steps},
      {"p_mode", c.p_mode.to_string()},
      {"contained_rate", done ? static_cast<double>(contained) / done : 0.0},
      {"contained_ci95", interval_json(wilson_interval(contained, done))},
      {"A_all_rate", done ? static_cast<double>(a_all) / done : 0.0},
      {"A_all_ci95", interval_json(wilson_interval(a_all, done))},
      {"S_lt_m_rate", done ? static_cast<double>(s_lt_m) / done : 0.0},
      {"S_lt_m_ci95", interval_json(wilson_interval(s_lt_m, done))},
      {"uncertain_rate", done ? static_cast<double>(uncertain) / done : 0.0},
      {"implication_exceptions", exceptions},
      {"cached_states", oracle.cached_states()},
      {"S_size", {{"mean", s.mean}, {"variance", s.variance}, {"expected_mean", s.expected_mean},
                  {"expected_variance", s.expected_variance}, {"mean_z", s.mean_z}, {"variance_z", s.variance_z},
                  {"p_below_m", s.p_below_m}, {"p_below_m_binomial", s.p_below_m_binomial},
                  {"chebyshev_bound", s.chebyshev_bound}}},
  };
  if (gnp) {
    summary["p"] = p;
    summary["gnp"] = {{"contained", rate_json(gnp_contained, done)},
                      {"from_S", rate_json(from_s, done)},
                      {"B_gt_m", rate_json(b_gt_m, done)},
                      {"unexplained_failures", gnp_failures_unexplained}};
  }
  summary["tv_checks"] = tv_checks_json(c, cc, oracle, finals);
  out.summary = summary;
  return out;
}

Output run_process_stats(const ExperimentConfig& c) {
  Output out;
  const auto params = Params::make(c.n, c.k, c.d);
  const RegularSampler sampler(OrderedHypergraph(c.n, c.k), params);
  std::vector<int> ts = c.t_grid;
  std::vector<int> vs = c.v_grid;
  if (ts.empty())
    for (int t = 0; t <= params.M; ++t) ts.push_back(t);
  if (vs.empty())
    for (int v = 1; v <= c.n; ++v) vs.push_back(v);
  std::vector<std::vector<int>> samples(c.trials);  // flattened (t, v) grid per trial
  const auto failures = run_trials(c, [&](std::size_t i) {
    Rng rng(RngStream{c.seed, i});
    const auto traj = expose_process(params, sampler, rng);
    auto& row = samples[i];
    for (int t : ts)
      for (int v : vs) row.push_back(traj.X[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)]);
  });
  absorb_failures(out, failures);

  Table table;
  table.columns = {"t", "v", "mean", "variance", "expected_mean", "expected_variance", "z", "within_3sigma"};
  std::uint64_t within = 0, cells = 0;
  double max_abs_z = 0.0;
  const double M = params.M;
  for (std::size_t a = 0; a < ts.size(); ++a) {
    for (std::size_t b = 0; b < vs.size(); ++b) {
      std::vector<double> xs;
      for (std::size_t i = 0; i < samples.size(); ++i)
        if (!failures[i]) xs.push_back(samples[i][a * vs.size() + b]);
      const auto mom = moments(xs);
      const double t = ts[a];
      const double tau = 1.0 - t / M;
      // X_t(v) counts v's edges among the last M - t of a uniform ordering.
      const double mean = tau * c.d;
      const double var = M > 1 ? (M - t) * (c.d / M) * (1.0 - c.d / M) * t / (M - 1.0) : 0.0;
      const double se = std::sqrt(var / std::max<double>(1.0, xs.size()));
      double z = 0.0;
      if (se > 0.0) z = (mom.mean - mean) / se;
      else if (mom.mean != mean) z = INFINITY;
      const bool ok = std::abs(z) <= 3.0;
      within += ok;
      ++cells;
      max_abs_z = std::max(max_abs_z, std::abs(z));
      table.rows.push_back({ts[a], vs[b], mom.mean, mom.variance, mean, var, z, ok});
    }
  }
  add_table(out, c, "trajectories", table);
  out.summary = {{"runs", c.trials - out.failed}, {"cells", cells}, {"within_3sigma", within},
                 {"max_abs_z", max_abs_z}, {"sampler", to_string(sampler.method())}};
  return out;
}

json class_sizes_json(const SwitchingClassSizes& cs) {
  json sizes = json::object();
  json ratios = json::object();
  for (const auto& [l, sz] : cs.sizes) {
    sizes[std::to_string(l)] = sz.get_str();
    const auto prev = cs.sizes.find(l - 1);
    if (prev != cs.sizes.end() && prev->second != 0) {
      const mpq_class r(sz, prev->second);
      ratios[std::to_string(l)] = {{"exact", mpq_class(r).get_str()}, {"value", r.get_d()}};
    }
  }
  return {{"sizes", sizes}, {"ratios", ratios}, {"L", cs.L}, {"interval", cs.is_interval()}};
}

Output run_switching_verify(const ExperimentConfig& c) {
  Output out;
  const auto params = Params::make(c.n, c.k, c.d);
  const auto G = load_prefix(c);
  json reports = json::array();
  json classes = json::object();
  std::vector<SwitchTarget> targets;
  if ((c.switch_kind == "remove" || c.switch_kind == "all") && c.e)
    targets.push_back({SwitchKind::kRemoveEdge, *c.e, 0, 0});
  if (c.switch_kind == "pair" || c.switch_kind == "all") targets.push_back({SwitchKind::kPairDegree, {}, c.u, c.v});
  if (c.switch_kind == "codegree" || c.switch_kind == "all") targets.push_back({SwitchKind::kCodegree, {}, c.u, c.v});
  bool all_ok = true;
  for (const auto& target : targets) {
    for (const auto& r : double_counting_all(G, params, target)) {
      all_ok = all_ok && r.identity_ok && r.sandwich_ok;
      reports.push_back({{"kind", to_string(target.kind)}, {"ell", r.ell}, {"source_size", r.source_size},
                         {"target_size", r.target_size}, {"E_B", r.edges_forward}, {"E_B_backward", r.edges_backward},
                         {"min_f", r.min_f}, {"max_f", r.max_f}, {"min_b", r.min_b}, {"max_b", r.max_b},
                         {"identity_ok", r.identity_ok}, {"sandwich_ok", r.sandwich_ok},
                         {"images_in_target", r.images_in_target}, {"degG_holds", r.degG_holds},
                         {"f_lower_bound", r.f_lower_bound}, {"b_upper_bound", r.b_upper_bound},
                         {"f_bound_ok", r.f_bound_ok}, {"b_bound_ok", r.b_bound_ok}});
    }
    if (target.kind != SwitchKind::kRemoveEdge) {
      const auto stat = target.kind == SwitchKind::kPairDegree ? SwitchStatistic::kPairDegree : SwitchStatistic::kCodegree;
      classes[to_string(target.kind)] = class_sizes_json(switching_class_sizes(G, c.u, c.v, stat, params));
    }
  }
  json instance = {{"n", c.n}, {"k", c.k}, {"d", c.d}, {"G", edges_text(G.edges())}, {"u", c.u}, {"v", c.v}};
  if (c.e) instance["e"] = c.e->to_string();
  out.files["switching.json"] = json({{"schema_version", kSchemaVersion}, {"instance", instance},
                                      {"reports", reports}, {"class_sizes", classes}})
                                    .dump(2) + "\n";
  out.summary = {{"reports", reports.size()}, {"all_ok", all_ok}};
  return out;
}

Output run_hamilton_sweep(const ExperimentConfig& c) {
  Output out;
  std::uint64_t budget = c.node_budget;
  if (std::getenv("HYPERCOUPLE_NODE_BUDGET")) budget = WorkBound::from_env().max_nodes;
  const auto rows = hamiltonicity_sweep(c.n, c.k, c.ell, c.d_list, c.trials, c.seed, budget, c.jobs);
  Table table;
  table.columns = {"d", "trials", "ham", "none", "unknown", "p_hat", "ci_lo", "ci_hi"};
  json per_d = json::array();
  for (const auto& r : rows) {
    table.rows.push_back({r.d, r.trials, r.ham, r.none, r.unknown, r.p_hat, r.ci.lo, r.ci.hi});
    per_d.push_back({{"d", r.d}, {"unknown_rate", r.trials ? static_cast<double>(r.unknown) / r.trials : 0.0},
                     {"sampler", r.sampler}});
  }
  add_table(out, c, "hamilton", table);
  out.summary = {{"ell", c.ell}, {"node_budget", budget}, {"per_d", per_d}};
  return out;
}

Output run_oracle_dump(const ExperimentConfig& c) {
  Output out;
  const auto params = Params::make(c.n, c.k, c.d);
  const auto G = load_prefix(c);
  const auto fam = count_extensions(G, params);
  json doc = {{"schema_version", kSchemaVersion}, {"n", c.n}, {"k", c.k}, {"d", c.d},
              {"t", G.size()}, {"G", edges_text(G.edges())}, {"count", fam.ordered_count.get_str()},
              {"unordered_count", fam.unordered_count.get_str()}, {"admissible", fam.admissible}};
  if (fam.admissible) {
    json classes = json::object();
    classes["pair"] = class_sizes_json(switching_class_sizes(G, c.u, c.v, SwitchStatistic::kPairDegree, params));
    classes["codegree"] = class_sizes_json(switching_class_sizes(G, c.u, c.v, SwitchStatistic::kCodegree, params));
    doc["classes"] = {{"u", c.u}, {"v", c.v}, {"by", classes}};
  }
  out.files["oracle.json"] = doc.dump(2) + "\n";
  out.summary = {{"count", fam.ordered_count.get_str()}, {"unordered_count", fam.unordered_count.get_str()}};
  return out;
}

Output run_validate_params(const ExperimentConfig& c) {
  Output out;
  const auto report = validate_gamma_epsilon(c.n, c.k, c.d, c.gamma, c.C);
  out.files["validate.json"] = report.to_json().dump(2) + "\n";
  out.summary = {{"feasible", report.feasible}, {"lhs", report.lhs}};
  return out;
}

}  // namespace

// ---------------------------------------------------------------- config

const char* to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "?";
}

ExperimentKind parse_kind(const std::string& text) {
  for (const auto& [k, name] : kKindNames)
    if (text == name) return k;
  fail(ErrorCode::kInvalidConfig, "unknown experiment kind '" + text + "'");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  require(j.is_object(), ErrorCode::kInvalidConfig, "config must be a JSON object");
  static const std::vector<std::string> known = {
      "kind", "n", "k", "d", "model", "m", "p", "gamma", "epsilon", "p_mode", "step_log", "C",
      "t_grid", "v_grid", "graph", "u", "v", "switch_kind", "e", "ell", "d_list", "node_budget",
      "seed", "trials", "jobs", "out_dir", "format"};
  for (const auto& [key, _] : j.items())
    require(std::find(known.begin(), known.end(), key) != known.end(), ErrorCode::kInvalidConfig,
            "unknown config key '" + key + "'");
  require(j.contains("kind"), ErrorCode::kInvalidConfig, "config needs a kind");
  ExperimentConfig c;
  try {
    c.kind = parse_kind(j.at("kind").get<std::string>());
    auto opt = [&](const char* key, auto& field) {
      if (j.contains(key) && !j.at(key).is_null()) j.at(key).get_to(field);
    };
    opt("n", c.n);
    opt("k", c.k);
    opt("d", c.d);
    opt("model", c.model);
    if (j.contains("m") && !j.at("m").is_null()) c.m = j.at("m").get<std::uint64_t>();
    if (j.contains("p") && !j.at("p").is_null()) c.p = j.at("p").get<double>();
    opt("gamma", c.gamma);
    if (j.contains("epsilon") && !j.at("epsilon").is_null()) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("p_mode")) c.p_mode = PMode::parse(j.at("p_mode").get<std::string>());
    opt("step_log", c.step_log);
    opt("C", c.C);
    opt("t_grid", c.t_grid);
    opt("v_grid", c.v_grid);
    opt("graph", c.graph_path);
    opt("u", c.u);
    opt("v", c.v);
    opt("switch_kind", c.switch_kind);
    if (j.contains("e") && !j.at("e").is_null()) c.e = Edge::from(j.at("e").get<std::vector<Vertex>>());
    opt("ell", c.ell);
    opt("d_list", c.d_list);
    opt("node_budget", c.node_budget);
    opt("seed", c.seed);
    opt("trials", c.trials);
    opt("jobs", c.jobs);
    opt("out_dir", c.out_dir);
    if (j.contains("format")) {
      const auto f = j.at("format").get<std::string>();
      require(f == "csv" || f == "json", ErrorCode::kInvalidConfig, "format must be csv or json");
      c.format = f == "csv" ? OutputFormat::kCsv : OutputFormat::kJson;
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidConfig, std::string("bad config value: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidConfig) throw;
    fail(ErrorCode::kInvalidConfig, e.what());
  }
  return c;
}

json ExperimentConfig::to_json() const {
  json j = {{"kind", hypercouple::to_string(kind)}, {"n", n}, {"k", k}, {"seed", seed},
            {"trials", trials}, {"jobs", jobs}, {"out_dir", out_dir},
            {"format", format == OutputFormat::kCsv ? "csv" : "json"}};
  switch (kind) {
    case ExperimentKind::kSample:
      j["model"] = model;
      if (model == "regular") j["d"] = d;
      if (m) j["m"] = *m;
      if (p) j["p"] = *p;
      break;
    case ExperimentKind::kCouple:
    case ExperimentKind::kCoupleGnp:
      j["d"] = d;
      j["gamma"] = gamma;
      j["epsilon"] = epsilon ? json(*epsilon) : json(nullptr);
      j["p_mode"] = p_mode.to_string();
      j["step_log"] = step_log;
      if (p) j["p"] = *p;
      break;
    case ExperimentKind::kProcessStats:
      j["d"] = d;
      j["t_grid"] = t_grid;
      j["v_grid"] = v_grid;
      break;
    case ExperimentKind::kSwitchingVerify:
    case ExperimentKind::kOracleDump:
      j["d"] = d;
      j["graph"] = graph_path;
      j["u"] = u;
      j["v"] = v;
      if (kind == ExperimentKind::kSwitchingVerify) j["switch_kind"] = switch_kind;
      if (e) j["e"] = std::vector<Vertex>(e->begin(), e->end());
      break;
    case ExperimentKind::kHamiltonSweep:
      j["ell"] = ell;
      j["d_list"] = d_list;
      j["node_budget"] = node_budget;
      break;
    case ExperimentKind::kValidateParams:
      j["d"] = d;
      j["gamma"] = gamma;
      j["C"] = C;
      break;
  }
  return j;
}

void ExperimentConfig::validate() const {
  const auto bad = [](bool ok, const std::string& msg) { require(ok, ErrorCode::kInvalidConfig, msg); };
  bad(trials >= 1, "trials must be at least 1");
  bad(jobs >= 1, "jobs must be at least 1");
  bad(n >= 1 && k >= 1, "n and k are required");
  as_config_error([&] {
    switch (kind) {
      case ExperimentKind::kSample:
        bad(model == "regular" || model == "gnm" || model == "gnp", "model must be gnm, gnp or regular");
        bad(k <= n, "need k <= n");
        if (model == "regular") Params::make(n, k, d);
        if (model == "gnm") {
          bad(m.has_value(), "model gnm needs m");
          bad(*m <= binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)), "m exceeds binom(n, k)");
        }
        if (model == "gnp") bad(p.has_value() && *p >= 0.0 && *p <= 1.0, "model gnp needs p in [0, 1]");
        break;
      case ExperimentKind::kCouple:
      case ExperimentKind::kCoupleGnp: {
        const auto cc = CouplingConfig::make(Params::make(n, k, d), gamma, epsilon, p_mode);
        if (kind == ExperimentKind::kCoupleGnp) {
          const double q = p ? *p : default_gnp_p(cc);
          bad(q >= 0.0 && q <= 1.0, p ? "p must lie in [0, 1]" : "default p is negative for gamma > 1/2; set p");
        }
        break;
      }
      case ExperimentKind::kProcessStats: {
        const auto params = Params::make(n, k, d);
        for (int t : t_grid) bad(t >= 0 && t <= params.M, "t_grid entries must lie in [0, M]");
        for (int x : v_grid) bad(x >= 1 && x <= n, "v_grid entries must lie in [1, n]");
        break;
      }
      case ExperimentKind::kSwitchingVerify:
      case ExperimentKind::kOracleDump:
        Params::make(n, k, d);
        bad(u >= 1 && u <= n && v >= 1 && v <= n && u != v, "u and v must be distinct vertices");
        bad(switch_kind == "remove" || switch_kind == "pair" || switch_kind == "codegree" || switch_kind == "all",
            "switch kind must be remove, pair, codegree or all");
        bad(switch_kind != "remove" || e.has_value(), "switch kind remove needs e");
        if (e) Hypergraph(n, k).check_edge(*e);
        break;
      case ExperimentKind::kHamiltonSweep:
        check_cycle_shape(n, k, ell);
        bad(!d_list.empty(), "d_list must not be empty");
        for (int x : d_list) Params::make(n, k, x);
        break;
      case ExperimentKind::kValidateParams:
        bad(n >= 2 && k >= 2 && d >= 1, "need n, k >= 2 and d >= 1");
        break;
    }
    return 0;
  });
}

json RunManifest::to_json() const {
  return {{"schema_version", kSchemaVersion}, {"code_version", code_version}, {"config", config},
          {"streams", streams}, {"wall_seconds", wall_seconds}, {"outputs", digests},
          {"failed_trials", failed_trials}, {"interval_method", "wilson-95"}};
}

RunManifest run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  Output out;
  switch (config.kind) {
    case ExperimentKind::kSample: out = run_sample(config); break;
    case ExperimentKind::kCouple: out = run_couple(config, false); break;
    case ExperimentKind::kCoupleGnp: out = run_couple(config, true); break;
    case ExperimentKind::kProcessStats: out = run_process_stats(config); break;
    case ExperimentKind::kSwitchingVerify: out = run_switching_verify(config); break;
    case ExperimentKind::kHamiltonSweep: out = run_hamilton_sweep(config); break;
    case ExperimentKind::kOracleDump: out = run_oracle_dump(config); break;
    case ExperimentKind::kValidateParams: out = run_validate_params(config); break;
  }

  std::filesystem::create_directories(config.out_dir);
  const auto path = [&](const std::string& name) { return (std::filesystem::path(config.out_dir) / name).string(); };
  if (out.failed) {
    write_file_atomic(path("errors.log"), out.error_log);
    throw Error(out.first_failure->code, std::to_string(out.failed) + " of " + std::to_string(config.trials) +
                                             " trials failed (see errors.log); first: " +
                                             out.first_failure->message);
  }

  json summary = {{"schema_version", kSchemaVersion}, {"kind", to_string(config.kind)},
                  {"interval_method", "wilson-95"}};
  summary.update(out.summary);
  out.files["summary.json"] = summary.dump(2) + "\n";

  RunManifest manifest;
  manifest.config = config.to_json();
  manifest.code_version = HYPERCOUPLE_VERSION;
  manifest.streams = {{"engine", "mt19937_64"},
                      {"seeding", "splitmix64 over (seed, stream, substream)"},
                      {"seed", config.seed},
                      {"trial_streams", {{"first", 0}, {"count", config.trials}}}};
  manifest.summary = summary;
  for (const auto& [name, contents] : out.files) {
    write_file_atomic(path(name), contents);
    manifest.digests[name] = sha256_hex(contents);
  }
  manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file_atomic(path("manifest.json"), manifest.to_json().dump(2) + "\n");
  return manifest;
}

// ---------------------------------------------------------------- helpers

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) == 1, ErrorCode::kInternal,
          "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), ErrorCode::kIo, "cannot open " + tmp);
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    require(static_cast<bool>(f), ErrorCode::kIo, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  require(!ec, ErrorCode::kIo, "cannot rename " + tmp + ": " + ec.message());
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_cell(const json& v) {
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_null()) return "";
  const auto s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string Table::to_json() const {
  json arr = json::array();
  for (const auto& row : rows) {
    json rec = json::object();
    for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) rec[columns[i]] = row[i];
    arr.push_back(std::move(rec));
  }
  return arr.dump(1) + "\n";
}

// ---------------------------------------------------------------- gamma

json GammaReport::to_json() const {
  json j = {{"schema_version", kSchemaVersion}, {"n", n}, {"k", k}, {"d", d}, {"gamma", gamma}, {"C", C},
            {"root_term", root_term}, {"lhs", lhs}, {"lhs_without_1_over_n", lhs_without_1_over_n},
            {"gamma_below_one", gamma_below_one}, {"feasible", feasible},
            {"feasible_without_1_over_n", feasible_without_1_over_n}, {"small_k_remark", small_k_remark},
            {"amgm_holds", amgm_holds}, {"epsilon_max", epsilon_max}, {"notes", notes}};
  j["epsilon_numerator"] = epsilon_numerator ? json(*epsilon_numerator) : json(nullptr);
  j["m"] = m ? json(*m) : json(nullptr);
  return j;
}

GammaReport validate_gamma_epsilon(int n, int k, int d, double gamma, double C) {
  GammaReport r;
  r.n = n;
  r.k = k;
  r.d = d;
  r.gamma = gamma;
  r.C = C;
  const double nn = n;
  r.root_term = std::cbrt(d / std::pow(nn, k - 1) + std::log(nn) / d);
  r.lhs = C * (r.root_term + 1.0 / nn);
  r.lhs_without_1_over_n = C * r.root_term;
  r.gamma_below_one = gamma < 1.0;
  r.feasible = gamma > 0.0 && r.gamma_below_one && r.lhs <= gamma;
  r.feasible_without_1_over_n = gamma > 0.0 && r.gamma_below_one && r.lhs_without_1_over_n <= gamma;
  r.small_k_remark = k <= 7;
  r.amgm_holds = r.root_term >= 1.0 / nn;
  r.epsilon_max = gamma / 3.0;
  if (!r.gamma_below_one) r.notes.push_back("gamma must be strictly below 1");
  if (r.small_k_remark)
    r.notes.push_back(r.amgm_holds ? "k <= 7: the 1/n term is dominated and may be dropped"
                                   : "k <= 7 but the cube-root term is below 1/n here");
  if ((static_cast<long long>(n) * d) % k == 0 && gamma > 0.0 && gamma < 1.0) {
    const int M = static_cast<int>(static_cast<long long>(n) * d / k);
    try {
      r.epsilon_numerator = choose_epsilon_numerator(M, gamma);
    } catch (const Error&) {
      r.notes.push_back("no epsilon = j/M with 1 <= j and epsilon <= gamma/3");
    }
    const double mr = (1.0 - gamma) * M;
    if (std::abs(mr - std::round(mr)) < 1e-9) r.m = static_cast<int>(std::round(mr));
    else r.notes.push_back("(1 - gamma) M is not an integer");
  } else if ((static_cast<long long>(n) * d) % k != 0) {
    r.notes.push_back("k does not divide nd");
  }
  return r;
}

// ---------------------------------------------------------------- law checks

namespace {

std::vector<std::uint64_t> rank_key(const std::vector<Edge>& edges, std::size_t t) {
  std::vector<std::uint64_t> key;
  key.reserve(t);
  for (std::size_t i = 0; i < t; ++i) key.push_back(colex_rank(edges[i]));
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

std::vector<EtaLawCheck> eta_law_checks(const std::vector<OrderedHypergraph>& finals, NextEdgeOracle& oracle,
                                        std::size_t top) {
  struct Visit {
    std::size_t sample = 0;  // a trace that passed through the state
    int t = 0;
    std::uint64_t count = 0;
    std::map<std::uint64_t, std::uint64_t> next;  // colex rank -> count
  };
  std::map<std::vector<std::uint64_t>, Visit> visits;
  for (std::size_t i = 0; i < finals.size(); ++i) {
    const auto& edges = finals[i].edges();
    for (std::size_t t = 0; t < edges.size(); ++t) {
      auto& v = visits[rank_key(edges, t)];
      if (v.count == 0) {
        v.sample = i;
        v.t = static_cast<int>(t);
      }
      ++v.count;
      ++v.next[colex_rank(edges[t])];
    }
  }
  std::vector<const std::pair<const std::vector<std::uint64_t>, Visit>*> order;
  for (const auto& entry : visits) order.push_back(&entry);
  std::stable_sort(order.begin(), order.end(), [](auto a, auto b) { return a->second.count > b->second.count; });
  if (order.size() > top) order.resize(top);

  std::vector<EtaLawCheck> out;
  for (const auto* entry : order) {
    const auto& v = entry->second;
    const auto state = finals[v.sample].prefix(static_cast<std::size_t>(v.t));
    const auto law = oracle.law(state);
    std::vector<std::uint64_t> observed(law->edges.size(), 0);
    std::vector<double> empirical(law->edges.size(), 0.0);
    for (std::size_t j = 0; j < law->edges.size(); ++j) {
      const auto it = v.next.find(colex_rank(law->edges[j]));
      if (it != v.next.end()) observed[j] = it->second;
      empirical[j] = static_cast<double>(observed[j]) / static_cast<double>(v.count);
    }
    const auto chi = chi_square_gof(observed, law->p);
    EtaLawCheck chk;
    auto sorted = state.as_set().sorted_edges();
    chk.state = edges_text(sorted);
    chk.t = v.t;
    chk.visits = v.count;
    chk.chi2_p = chi.p_value;
    chk.tv = total_variation(empirical, law->p);
    chk.impossible = chi.impossible_observations;
    out.push_back(chk);
  }
  return out;
}

UniformityCheck uniformity_check(const std::vector<OrderedHypergraph>& finals, const Params& params,
                                 WorkBound bound) {
  const auto fam = count_extensions(OrderedHypergraph(params.n, params.k), params, true, bound);
  std::map<std::vector<std::uint64_t>, std::size_t> index;
  for (const auto& comp : fam.completions) index.emplace(rank_key(comp, comp.size()), index.size());
  UniformityCheck u;
  u.family_size = index.size();
  u.samples = finals.size();
  std::vector<std::uint64_t> counts(index.size(), 0);
  for (const auto& R : finals) {
    const auto it = index.find(rank_key(R.edges(), R.size()));
    if (it == index.end()) ++u.outside_family;
    else ++counts[it->second];
  }
  require(u.family_size > 0, ErrorCode::kInadmissible, "empty completion family");
  const std::vector<double> uniform(index.size(), 1.0 / static_cast<double>(index.size()));
  std::vector<double> empirical(index.size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i)
    empirical[i] = u.samples ? static_cast<double>(counts[i]) / static_cast<double>(u.samples) : 0.0;
  u.tv = total_variation(empirical, uniform);
  u.chi2_p = chi_square_gof(counts, uniform).p_value;
  return u;
}

}  // namespace hypercouple

// Command-line front end. Every subcommand becomes one JSON experiment
// config handed to the C API; exit code 2 for bad configs, 1 for failures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypercouple/hypercouple.h"

namespace {

using nlohmann::json;

struct Globals {
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  int jobs = 1;
  std::string out = "hypercouple-out";
  std::string format = "csv";
};

struct Model {
  int n = 0, k = 0, d = 0;
  std::optional<std::uint64_t> m;
  std::optional<double> p;
  std::string model = "regular";
  double gamma = 0.0;
  std::optional<double> epsilon;
  std::string p_mode = "exact";
  bool steps = false;
  std::optional<std::uint64_t> traces;
  double C = 1.0;
  std::vector<int> t_grid, v_grid;
  std::string graph;
  int u = 1, v = 2;
  std::string switch_kind = "all";
  std::vector<int> e;
  int ell = 0;
  std::vector<int> d_list;
  std::uint64_t node_budget = 10'000'000;
};

void print_summary(const std::string& text, std::ostream& os) {
  const auto j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    os << text << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& [key, _] : j.items()) width = std::max(width, key.size());
  for (const auto& [key, value] : j.items()) {
    os << key << std::string(width - key.size() + 2, ' ');
    os << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

int exit_code(hc_status status) { return status == HC_ERR_INVALID_CONFIG ? 2 : 1; }

int run(const std::string& kind, const Globals& g, const Model& m) {
  json config = {{"kind", kind}, {"n", m.n}, {"k", m.k}, {"seed", g.seed},
                 {"trials", m.traces.value_or(g.trials)}, {"jobs", g.jobs}, {"out_dir", g.out},
                 {"format", g.format}};
  if (kind == "sample") {
    config["model"] = m.model;
    config["d"] = m.d;
    if (m.m) config["m"] = *m.m;
    if (m.p) config["p"] = *m.p;
  } else if (kind == "couple" || kind == "couple-gnp") {
    config["d"] = m.d;
    config["gamma"] = m.gamma;
    if (m.epsilon) config["epsilon"] = *m.epsilon;
    config["p_mode"] = m.p_mode;
    config["step_log"] = m.steps;
    if (m.p) config["p"] = *m.p;
  } else if (kind == "process-stats") {
    config["d"] = m.d;
    config["t_grid"] = m.t_grid;
    config["v_grid"] = m.v_grid;
  } else if (kind == "switching-verify" || kind == "oracle-dump") {
    config["d"] = m.d;
    config["graph"] = m.graph;
    config["u"] = m.u;
    config["v"] = m.v;
    if (kind == "switching-verify") config["switch_kind"] = m.switch_kind;
    if (!m.e.empty()) config["e"] = m.e;
  } else if (kind == "hamilton-sweep") {
    config["ell"] = m.ell;
    config["d_list"] = m.d_list;
    config["node_budget"] = m.node_budget;
  } else if (kind == "validate-params") {
    config["d"] = m.d;
    config["gamma"] = m.gamma;
    config["C"] = m.C;
  }

  hc_experiment* exp = nullptr;
  hc_status st = hc_experiment_create(config.dump().c_str(), &exp);
  if (st != HC_OK) {
    std::cerr << "error (" << hc_status_name(st) << "): " << hc_last_error() << '\n';
    return exit_code(st);
  }
  st = hc_experiment_run(exp);
  if (st != HC_OK) {
    std::cerr << "error (" << hc_status_name(st) << "): " << hc_last_error() << '\n';
    hc_experiment_free(exp);
    return exit_code(st);
  }
  // sample writes graphs to stdout, so its summary goes to stderr
  if (kind == "sample") {
    std::ifstream in(g.out + "/samples.edges");
    std::cout << in.rdbuf();
    print_summary(hc_experiment_summary(exp), std::cerr);
  } else {
    print_summary(hc_experiment_summary(exp), std::cout);
  }
  hc_experiment_free(exp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Couplings of random and random regular hypergraphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hc_version()));
  Globals g;
  Model m;
  app.add_option("--seed", g.seed, "64-bit run seed")->capture_default_str();
  app.add_option("--trials", g.trials, "number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--format", g.format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  auto params = [&](CLI::App* sc, bool need_d) {
    sc->add_option("--n", m.n, "vertices")->required();
    sc->add_option("--k", m.k, "uniformity")->required();
    auto* d = sc->add_option("--d", m.d, "degree");
    if (need_d) d->required();
  };

  auto* sample = app.add_subcommand("sample", "sample G(n,m), G(n,p) or R(n,d) as edge lists");
  params(sample, false);
  sample->add_option("--model", m.model)->check(CLI::IsMember({"gnm", "gnp", "regular"}))->capture_default_str();
  sample->add_option("--m", m.m, "edges for gnm");
  sample->add_option("--p", m.p, "edge probability for gnp");

  auto couple_flags = [&](CLI::App* sc) {
    params(sc, true);
    sc->add_option("--gamma", m.gamma)->required();
    sc->add_option("--epsilon", m.epsilon);
    sc->add_option("--p-mode", m.p_mode, "exact or mc:<trials>")->capture_default_str();
    sc->add_option("--traces", m.traces, "alias for --trials");
    sc->add_flag("--steps", m.steps, "also write the per-step log");
  };
  auto* couple = app.add_subcommand("couple", "run the coupling of G(n,m) into R(n,d)");
  couple_flags(couple);
  auto* couple_gnp = app.add_subcommand("couple-gnp", "the G(n,p) variant of the coupling");
  couple_flags(couple_gnp);
  couple_gnp->add_option("--p", m.p, "edge probability (default (1-2 gamma) d / binom(n-1,k-1))");

  auto* process = app.add_subcommand("process-stats", "degree trajectories of the regular process");
  params(process, true);
  process->add_option("--t-grid", m.t_grid)->delimiter(',');
  process->add_option("--v-grid", m.v_grid)->delimiter(',');

  auto* switching = app.add_subcommand("switching-verify", "exact double counting of switchings");
  params(switching, true);
  switching->add_option("--graph", m.graph, "prefix G as an edge list");
  switching->add_option("--u", m.u)->capture_default_str();
  switching->add_option("--v", m.v)->capture_default_str();
  switching->add_option("--kind", m.switch_kind)
      ->check(CLI::IsMember({"remove", "pair", "codegree", "all"}))
      ->capture_default_str();
  switching->add_option("--e", m.e, "edge for the removal switching")->delimiter(',');

  auto* hamilton = app.add_subcommand("hamilton-sweep", "l-Hamiltonicity of R(n,d) across d");
  hamilton->add_option("--n", m.n)->required();
  hamilton->add_option("--k", m.k)->required();
  hamilton->add_option("--ell", m.ell)->required();
  hamilton->add_option("--d-list", m.d_list)->delimiter(',')->required();
  hamilton->add_option("--node-budget", m.node_budget)->capture_default_str();

  auto* oracle = app.add_subcommand("oracle-dump", "exact completion counts and switching classes");
  params(oracle, true);
  oracle->add_option("--graph", m.graph, "prefix G as an edge list");
  oracle->add_option("--u", m.u)->capture_default_str();
  oracle->add_option("--v", m.v)->capture_default_str();

  auto* validate = app.add_subcommand("validate-params", "check gamma against the coupling condition");
  params(validate, true);
  validate->add_option("--gamma", m.gamma)->required();
  validate->add_option("--C", m.C)->capture_default_str();

  // subcommands also accept the global flags after their name
  for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; })) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  for (auto* sc : app.get_subcommands()) return run(sc->get_name(), g, m);
  return 2;
}

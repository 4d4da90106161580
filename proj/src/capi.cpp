#include "hypercouple/hypercouple.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "hypercouple/edge_list.hpp"
#include "hypercouple/error.hpp"
#include "hypercouple/exact_enum.hpp"
#include "hypercouple/experiments.hpp"
#include "hypercouple/hamilton.hpp"
#include "hypercouple/samplers.hpp"

struct hc_graph {
  hypercouple::OrderedHypergraph graph;
};

struct hc_experiment {
  hypercouple::ExperimentConfig config;
  std::string summary;
  std::string manifest;
};

namespace {

thread_local std::string last_error;

template <class Fn>
hc_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return HC_OK;
  } catch (const hypercouple::Error& e) {
    last_error = e.what();
    return static_cast<hc_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return HC_ERR_INTERNAL;
}

hc_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return HC_ERR_ARGUMENT;
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* hc_version(void) { return HYPERCOUPLE_VERSION; }

const char* hc_status_name(hc_status status) {
  switch (status) {
    case HC_OK: return "ok";
    case HC_ERR_DOMAIN: return "domain";
    case HC_ERR_INADMISSIBLE: return "inadmissible";
    case HC_ERR_TOO_LARGE: return "too_large";
    case HC_ERR_REJECTION_BUDGET: return "rejection_budget";
    case HC_ERR_ILLEGAL_SWITCH: return "illegal_switch";
    case HC_ERR_INVALID_CONFIG: return "invalid_config";
    case HC_ERR_IO: return "io";
    case HC_ERR_INTERNAL: return "internal";
    case HC_ERR_ARGUMENT: return "argument";
  }
  return "unknown";
}

const char* hc_last_error(void) { return last_error.c_str(); }

void hc_string_free(char* s) { std::free(s); }

hc_status hc_graph_create(int n, int k, hc_graph** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new hc_graph{hypercouple::OrderedHypergraph(n, k)}; });
}

hc_status hc_graph_load(const char* path, hc_graph** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new hc_graph{hypercouple::load_edge_list(path).graph}; });
}

void hc_graph_free(hc_graph* g) { delete g; }

hc_status hc_graph_add_edge(hc_graph* g, const int* vertices, int count) {
  if (!g) return null_argument("graph");
  if (!vertices) return null_argument("vertices");
  return guarded([&] {
    hypercouple::require(count == g->graph.k(), hypercouple::ErrorCode::kDomain, "edge size differs from k");
    const std::vector<int> vs(vertices, vertices + count);
    g->graph.push_back(hypercouple::Edge::from(vs));
  });
}

hc_status hc_graph_info(const hc_graph* g, int* n, int* k, size_t* edges) {
  if (!g) return null_argument("graph");
  if (n) *n = g->graph.n();
  if (k) *k = g->graph.k();
  if (edges) *edges = g->graph.size();
  last_error.clear();
  return HC_OK;
}

hc_status hc_graph_to_edge_list(const hc_graph* g, char** out) {
  if (!g) return null_argument("graph");
  if (!out) return null_argument("out");
  return guarded([&] { *out = duplicate(hypercouple::to_edge_list(g->graph)); });
}

hc_status hc_sample_regular(int n, int k, int d, uint64_t seed, uint64_t stream, hc_graph** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    using namespace hypercouple;
    const auto params = Params::make(n, k, d);
    const RegularSampler sampler(OrderedHypergraph(n, k), params);
    Rng rng(RngStream{seed, stream});
    *out = new hc_graph{sampler.sample(rng)};
  });
}

hc_status hc_count_extensions(const hc_graph* prefix, int d, char** count) {
  if (!prefix) return null_argument("prefix");
  if (!count) return null_argument("count");
  return guarded([&] {
    using namespace hypercouple;
    const auto params = Params::make(prefix->graph.n(), prefix->graph.k(), d);
    *count = duplicate(count_extensions(prefix->graph, params).ordered_count.get_str());
  });
}

hc_status hc_find_hamilton_cycle(const hc_graph* g, int ell, uint64_t node_budget, hc_ham_verdict* verdict,
                                 int* order, int* offset) {
  if (!g) return null_argument("graph");
  if (!verdict) return null_argument("verdict");
  return guarded([&] {
    using namespace hypercouple;
    const auto res = find_hamilton_cycle(g->graph.as_set(), ell, node_budget);
    switch (res.verdict) {
      case HamVerdict::kFound: *verdict = HC_HAM_FOUND; break;
      case HamVerdict::kNone: *verdict = HC_HAM_NONE; break;
      case HamVerdict::kUnknown: *verdict = HC_HAM_UNKNOWN; break;
    }
    if (res.cycle) {
      if (order) std::copy(res.cycle->order.begin(), res.cycle->order.end(), order);
      if (offset) *offset = res.cycle->offset;
    }
  });
}

hc_status hc_experiment_create(const char* config_json, hc_experiment** out) {
  if (!config_json) return null_argument("config_json");
  if (!out) return null_argument("out");
  return guarded([&] {
    using namespace hypercouple;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kInvalidConfig, std::string("config is not valid JSON: ") + e.what());
    }
    auto config = ExperimentConfig::from_json(j);
    config.validate();
    *out = new hc_experiment{std::move(config), {}, {}};
  });
}

hc_status hc_experiment_run(hc_experiment* exp) {
  if (!exp) return null_argument("experiment");
  return guarded([&] {
    const auto manifest = hypercouple::run_experiment(exp->config);
    exp->summary = manifest.summary.dump(2);
    exp->manifest = manifest.to_json().dump(2);
  });
}

const char* hc_experiment_summary(const hc_experiment* exp) { return exp ? exp->summary.c_str() : ""; }

const char* hc_experiment_manifest(const hc_experiment* exp) { return exp ? exp->manifest.c_str() : ""; }

void hc_experiment_free(hc_experiment* exp) { delete exp; }

}  // extern "C"

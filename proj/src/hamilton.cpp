#include "hypercouple/hamilton.hpp"

#include <algorithm>
#include <unordered_set>

#include "hypercouple/error.hpp"
#include "hypercouple/parallel.hpp"
#include "hypercouple/samplers.hpp"

namespace hypercouple {

namespace {

std::vector<std::vector<int>> window_positions(int n, int k, int ell, int offset) {
  const int s = k - ell;
  std::vector<std::vector<int>> out;
  for (int start = offset; start < n; start += s) {
    std::vector<int> w;
    for (int i = 0; i < k; ++i) w.push_back((start + i) % n);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

std::vector<Edge> CycleCertificate::edges() const {
  const int n = static_cast<int>(order.size());
  std::vector<Edge> out;
  for (const auto& w : window_positions(n, k, ell, offset)) {
    std::vector<Vertex> vs;
    for (int p : w) vs.push_back(order[static_cast<std::size_t>(p)]);
    out.push_back(Edge::from(vs));
  }
  return out;
}

void check_cycle_shape(int n, int k, int ell) {
  require(k >= 2 && n >= 1, ErrorCode::kDomain, "need k >= 2");
  require(ell >= 1 && ell <= k - 1, ErrorCode::kDomain, "overlap must satisfy 1 <= l <= k-1");
  require(n % (k - ell) == 0, ErrorCode::kDomain,
          "n = " + std::to_string(n) + " is not divisible by k - l = " + std::to_string(k - ell));
}

bool cycle_shape_feasible(int n, int k, int ell) {
  check_cycle_shape(n, k, ell);
  return n >= 2 * k - ell;
}

bool verify_cycle(const Hypergraph& H, const CycleCertificate& cert) {
  const int n = H.n();
  require(cert.k == H.k(), ErrorCode::kDomain, "certificate uniformity differs from H");
  require(static_cast<int>(cert.order.size()) == n, ErrorCode::kDomain, "certificate must list all n vertices");
  require(cycle_shape_feasible(n, cert.k, cert.ell), ErrorCode::kDomain, "n < 2k - l admits no l-cycle");
  require(cert.offset >= 0 && cert.offset < cert.stride(), ErrorCode::kDomain, "window offset out of range");
  std::vector<Vertex> sorted = cert.order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    require(sorted[static_cast<std::size_t>(i)] == i + 1, ErrorCode::kDomain, "certificate is not a permutation of [1, n]");
  for (const auto& e : cert.edges())
    if (!H.contains(e)) return false;
  return true;
}

CycleCertificate canonical_form(const CycleCertificate& cert) {
  const int n = static_cast<int>(cert.order.size());
  const int s = cert.stride();
  require(n > 0 && s > 0, ErrorCode::kDomain, "empty certificate");
  const auto at = std::find(cert.order.begin(), cert.order.end(), 1);
  require(at != cert.order.end(), ErrorCode::kDomain, "certificate does not contain vertex 1");
  const int r = static_cast<int>(at - cert.order.begin());
  const auto mod = [](int a, int m) { return ((a % m) + m) % m; };

  CycleCertificate fwd = cert;
  CycleCertificate rev = cert;
  for (int i = 0; i < n; ++i) {
    fwd.order[static_cast<std::size_t>(i)] = cert.order[static_cast<std::size_t>(mod(r + i, n))];
    rev.order[static_cast<std::size_t>(i)] = cert.order[static_cast<std::size_t>(mod(r - i, n))];
  }
  fwd.offset = mod(cert.offset - r, s);
  // old window [p, p+k-1] lands on new positions [r-p-k+1, r-p]
  rev.offset = mod(r - cert.offset - cert.k + 1, s);
  if (rev.order < fwd.order || (rev.order == fwd.order && rev.offset < fwd.offset)) return rev;
  return fwd;
}

const char* to_string(HamVerdict verdict) {
  switch (verdict) {
    case HamVerdict::kFound: return "ham";
    case HamVerdict::kNone: return "none";
    case HamVerdict::kUnknown: return "unknown";
  }
  return "?";
}

// ---------------------------------------------------------------- search

namespace {

class CycleSearch {
 public:
  CycleSearch(const Hypergraph& H, int ell, std::uint64_t budget)
      : n_(H.n()), k_(H.k()), ell_(ell), budget_(budget) {
    for (const auto& e : H.edge_set()) {
      std::uint64_t m = 0;
      for (Vertex v : e) m |= std::uint64_t{1} << (v - 1);
      edges_.insert(m);
      // every nonempty proper subset
      for (std::uint64_t sub = (m - 1) & m; sub != 0; sub = (sub - 1) & m) shadow_.insert(sub);
    }
  }

  HamiltonResult run() {
    HamiltonResult res;
    const int s = k_ - ell_;
    const auto mod = [](int a, int m) { return ((a % m) + m) % m; };
    bool exhausted = false;
    for (int o = 0; o < s && !res.cycle; ++o) {
      const int mirror = mod(-o - k_ + 1, s);
      if (mirror < o) continue;  // its reflection is searched under offset `mirror`
      break_reflection_ = mirror == o;
      offset_ = o;
      prepare();
      order_.assign(static_cast<std::size_t>(n_), 0);
      used_ = 1;  // vertex 1
      order_[0] = 1;
      if (!window_checks_ok(0)) continue;
      if (dfs(1)) {
        CycleCertificate c;
        c.order = order_;
        c.k = k_;
        c.ell = ell_;
        c.offset = o;
        res.cycle = c;
      }
      if (over_budget_) {
        exhausted = true;
        break;
      }
    }
    res.nodes = nodes_;
    if (res.cycle) res.verdict = HamVerdict::kFound;
    else res.verdict = exhausted ? HamVerdict::kUnknown : HamVerdict::kNone;
    return res;
  }

 private:
  void prepare() {
    windows_ = window_positions(n_, k_, ell_, offset_);
    by_position_.assign(static_cast<std::size_t>(n_), {});
    for (std::size_t w = 0; w < windows_.size(); ++w)
      for (int p : windows_[w]) by_position_[static_cast<std::size_t>(p)].push_back(w);
  }

  // Positions 0..p are filled. Every window touching p must be an edge if
  // complete, or a subset of some edge if partial.
  bool window_checks_ok(int p) const {
    for (auto w : by_position_[static_cast<std::size_t>(p)]) {
      std::uint64_t m = 0;
      int known = 0;
      for (int q : windows_[w])
        if (q <= p) {
          m |= std::uint64_t{1} << (order_[static_cast<std::size_t>(q)] - 1);
          ++known;
        }
      if (known == k_) {
        if (!edges_.count(m)) return false;
      } else if (!shadow_.count(m)) {
        return false;
      }
    }
    return true;
  }

  bool dfs(int p) {
    if (p == n_) return true;
    for (Vertex v = 2; v <= n_; ++v) {
      const std::uint64_t bit = std::uint64_t{1} << (v - 1);
      if (used_ & bit) continue;
      if (break_reflection_ && p == n_ - 1 && v < order_[1]) continue;
      if (++nodes_ > budget_) {
        over_budget_ = true;
        return false;
      }
      order_[static_cast<std::size_t>(p)] = v;
      used_ |= bit;
      if (window_checks_ok(p) && dfs(p + 1)) return true;
      used_ &= ~bit;
      if (over_budget_) return false;
    }
    return false;
  }

  int n_, k_, ell_;
  std::uint64_t budget_;
  std::unordered_set<std::uint64_t> edges_;
  std::unordered_set<std::uint64_t> shadow_;
  int offset_ = 0;
  bool break_reflection_ = false;
  std::vector<std::vector<int>> windows_;
  std::vector<std::vector<std::size_t>> by_position_;
  std::vector<Vertex> order_;
  std::uint64_t used_ = 0;
  std::uint64_t nodes_ = 0;
  bool over_budget_ = false;
};

}  // namespace

HamiltonResult find_hamilton_cycle(const Hypergraph& H, int ell, std::uint64_t node_budget) {
  const int n = H.n();
  const int k = H.k();
  require(n <= 64, ErrorCode::kTooLarge, "cycle search supports n <= 64");
  if (!cycle_shape_feasible(n, k, ell)) return {};
  if (H.size() < static_cast<std::size_t>(n / (k - ell))) return {};
  for (Vertex v = 1; v <= n; ++v)
    if (H.degree(v) == 0) return {};
  return CycleSearch(H, ell, node_budget).run();
}

std::vector<SweepRow> hamiltonicity_sweep(int n, int k, int ell, const std::vector<int>& d_values,
                                          std::uint64_t trials, std::uint64_t seed,
                                          std::uint64_t node_budget, int jobs) {
  check_cycle_shape(n, k, ell);
  std::vector<SweepRow> rows;
  for (int d : d_values) {
    const auto params = Params::make(n, k, d);
    const RegularSampler sampler(OrderedHypergraph(n, k), params);
    std::vector<HamVerdict> verdicts(trials);
    parallel_for(trials, jobs, [&](std::size_t trial) {
      Rng rng(RngStream{seed, trial}.substream(static_cast<std::uint64_t>(d)));
      const auto R = sampler.sample(rng);
      const auto res = find_hamilton_cycle(R.as_set(), ell, node_budget);
      if (res.cycle && !verify_cycle(R.as_set(), *res.cycle))
        fail(ErrorCode::kInternal, "finder returned a certificate the verifier rejects");
      verdicts[trial] = res.verdict;
    });
    SweepRow row;
    row.d = d;
    row.trials = trials;
    for (auto v : verdicts) {
      if (v == HamVerdict::kFound) ++row.ham;
      else if (v == HamVerdict::kNone) ++row.none;
      else ++row.unknown;
    }
    row.p_hat = trials ? static_cast<double>(row.ham) / static_cast<double>(trials) : 0.0;
    row.ci = wilson_interval(row.ham, trials);
    row.sampler = to_string(sampler.method());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hypercouple

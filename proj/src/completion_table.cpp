#include "hypercouple/completion_table.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

namespace hypercouple {

CompletionTable CompletionTable::build(const OrderedHypergraph& G, const Params& params,
                                       std::uint64_t max_states) {
  require(G.n() == params.n && G.k() == params.k, ErrorCode::kDomain, "graph does not match params");
  const auto state = residual_state(G, params);
  CompletionTable table;
  table.params_ = params;
  table.base_ = G;
  table.max_states_ = max_states;
  table.initial_ = state.residual;
  for_each_complement_edge(G.as_set(), [&](const Edge& e) {
    for (Vertex v : e)
      if (state.r(v) == 0) return;
    table.candidates_.push_back(e);
  });
  const std::size_t E = table.candidates_.size();
  const auto n = static_cast<std::size_t>(params.n);
  table.remaining_.assign(E + 1, std::vector<int>(n + 1, 0));
  for (std::size_t i = E; i-- > 0;) {
    table.remaining_[i] = table.remaining_[i + 1];
    for (Vertex v : table.candidates_[i]) ++table.remaining_[i][static_cast<std::size_t>(v)];
  }
  table.index_bits_ = std::bit_width(E + 1);
  table.residual_bits_ = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(params.d))));
  require(table.index_bits_ + params.n * table.residual_bits_ <= 64, ErrorCode::kTooLarge,
          "completion table state does not fit a 64-bit key");
  auto r = table.initial_;
  table.count_ = table.value(0, r);
  return table;
}

std::uint64_t CompletionTable::pack(std::size_t i, const std::vector<int>& r) const {
  std::uint64_t key = i;
  int shift = index_bits_;
  for (std::size_t v = 1; v < r.size(); ++v) {
    key |= static_cast<std::uint64_t>(r[v]) << shift;
    shift += residual_bits_;
  }
  return key;
}

bool CompletionTable::pruned(std::size_t i, const std::vector<int>& r) const {
  const auto& rem = remaining_[i];
  for (std::size_t v = 1; v < r.size(); ++v)
    if (r[v] > rem[v]) return true;
  return false;
}

std::uint64_t CompletionTable::value(std::size_t i, std::vector<int>& r) {
  if (pruned(i, r)) return 0;
  if (i == candidates_.size()) return 1;
  const std::uint64_t key = pack(i, r);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  std::uint64_t total = value(i + 1, r);
  const Edge& e = candidates_[i];
  bool fits = true;
  for (Vertex v : e)
    if (r[static_cast<std::size_t>(v)] == 0) fits = false;
  if (fits) {
    for (Vertex v : e) --r[static_cast<std::size_t>(v)];
    const std::uint64_t with = value(i + 1, r);
    for (Vertex v : e) ++r[static_cast<std::size_t>(v)];
    if (with > std::numeric_limits<std::uint64_t>::max() - total)
      fail(ErrorCode::kTooLarge, "completion count overflows 64 bits");
    total += with;
  }
  if (memo_.size() >= max_states_)
    fail(ErrorCode::kTooLarge, "completion table exceeds " + std::to_string(max_states_) + " states");
  memo_.emplace(key, total);
  return total;
}

std::uint64_t CompletionTable::lookup(std::size_t i, const std::vector<int>& r) const {
  if (pruned(i, r)) return 0;
  if (i == candidates_.size()) return 1;
  const auto it = memo_.find(pack(i, r));
  if (it == memo_.end()) fail(ErrorCode::kInternal, "completion table state missing");
  return it->second;
}

std::vector<Edge> CompletionTable::sample(Rng& rng) const {
  require(count_ > 0, ErrorCode::kInadmissible, "prefix has no d-regular completion");
  std::vector<Edge> out;
  auto r = initial_;
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const std::uint64_t here = lookup(i, r);
    const Edge& e = candidates_[i];
    bool fits = true;
    for (Vertex v : e)
      if (r[static_cast<std::size_t>(v)] == 0) fits = false;
    if (!fits) continue;
    for (Vertex v : e) --r[static_cast<std::size_t>(v)];
    const std::uint64_t with = lookup(i + 1, r);
    if (rng.below(here) < with) {
      out.push_back(e);
    } else {
      for (Vertex v : e) ++r[static_cast<std::size_t>(v)];
    }
  }
  return out;
}

OrderedHypergraph CompletionTable::sample_ordered(Rng& rng) const {
  auto edges = sample(rng);
  rng.shuffle(std::span<Edge>(edges));
  OrderedHypergraph out = base_;
  for (const auto& e : edges) out.push_back(e);
  return out;
}

}  // namespace hypercouple

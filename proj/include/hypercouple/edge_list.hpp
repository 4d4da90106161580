#pragma once

// Edge-list text format:
//
//   # n=<n> k=<k> [d=<d>]
//   1 2 3
//   1 4 5
//
// One edge per line, vertex ids space-separated and sorted, 1-based. Line
// order is the edge order of the ordered k-graph.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypercouple/core.hpp"

namespace hypercouple {

struct EdgeListDocument {
  OrderedHypergraph graph;
  std::optional<int> d;
};

void write_edge_list(std::ostream& out, const OrderedHypergraph& G, std::optional<int> d = std::nullopt);
std::string to_edge_list(const OrderedHypergraph& G, std::optional<int> d = std::nullopt);

/// Reads one document; throws kIo on malformed input.
EdgeListDocument read_edge_list(std::istream& in);
EdgeListDocument parse_edge_list(const std::string& text);
EdgeListDocument load_edge_list(const std::string& path);

/// Reads consecutive documents separated by header lines (as written by `sample`).
std::vector<EdgeListDocument> read_edge_list_stream(std::istream& in);

}  // namespace hypercouple

#include "hypercouple/edge_list.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hypercouple {

namespace {

struct Header {
  int n = 0;
  int k = 0;
  std::optional<int> d;
};

bool is_header(const std::string& line) {
  return !line.empty() && line[0] == '#';
}

Header parse_header(const std::string& line) {
  Header h;
  std::istringstream in(line.substr(1));
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) fail(ErrorCode::kIo, "malformed header token '" + token + "'");
    const std::string key = token.substr(0, eq);
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(token.substr(eq + 1), &used);
      if (used != token.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(ErrorCode::kIo, "malformed header value in '" + token + "'");
    }
    if (key == "n") h.n = value;
    else if (key == "k") h.k = value;
    else if (key == "d") h.d = value;
    else fail(ErrorCode::kIo, "unknown header key '" + key + "'");
  }
  if (h.n < 1 || h.k < 1) fail(ErrorCode::kIo, "header must define positive n and k");
  return h;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

Edge parse_edge_line(const std::string& line, int k) {
  std::istringstream in(line);
  std::vector<Vertex> vs;
  long long x = 0;
  while (in >> x) vs.push_back(static_cast<Vertex>(x));
  if (!in.eof()) fail(ErrorCode::kIo, "non-numeric token in edge line '" + line + "'");
  if (static_cast<int>(vs.size()) != k)
    fail(ErrorCode::kIo, "edge line '" + line + "' does not have k vertices");
  try {
    return Edge::from(vs);
  } catch (const Error& e) {
    fail(ErrorCode::kIo, std::string("bad edge line: ") + e.what());
  }
}

}  // namespace

void write_edge_list(std::ostream& out, const OrderedHypergraph& G, std::optional<int> d) {
  out << "# n=" << G.n() << " k=" << G.k();
  if (d) out << " d=" << *d;
  out << '\n';
  for (const auto& e : G.edges()) {
    for (int i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
}

std::string to_edge_list(const OrderedHypergraph& G, std::optional<int> d) {
  std::ostringstream out;
  write_edge_list(out, G, d);
  return out.str();
}

std::vector<EdgeListDocument> read_edge_list_stream(std::istream& in) {
  std::vector<EdgeListDocument> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    if (is_header(line)) {
      const Header h = parse_header(line);
      try {
        docs.push_back(EdgeListDocument{OrderedHypergraph(h.n, h.k), h.d});
      } catch (const Error& e) {
        fail(ErrorCode::kIo, std::string("bad header: ") + e.what());
      }
      continue;
    }
    if (docs.empty()) fail(ErrorCode::kIo, "edge line before header");
    auto& doc = docs.back();
    const Edge e = parse_edge_line(line, doc.graph.k());
    if (e[e.size() - 1] > doc.graph.n()) fail(ErrorCode::kIo, "vertex exceeds n in '" + line + "'");
    if (doc.graph.contains(e)) fail(ErrorCode::kIo, "duplicate edge " + e.to_string());
    doc.graph.push_back(e);
  }
  return docs;
}

EdgeListDocument read_edge_list(std::istream& in) {
  auto docs = read_edge_list_stream(in);
  if (docs.size() != 1) fail(ErrorCode::kIo, "expected exactly one edge-list document");
  return std::move(docs.front());
}

EdgeListDocument parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

EdgeListDocument load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  return read_edge_list(in);
}

}  // namespace hypercouple

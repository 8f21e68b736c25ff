#include "rtt/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rtt {

GraphFormat parse_format(std::string_view name) {
  if (name == "edge-list" || name == "edges" || name == "el") return GraphFormat::edge_list;
  if (name == "graph6" || name == "g6") return GraphFormat::graph6;
  throw InvalidArgument("unknown graph format '" + std::string(name) + "'");
}

std::string_view to_string(GraphFormat f) { return f == GraphFormat::graph6 ? "graph6" : "edge-list"; }

GraphFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".g6" ? GraphFormat::graph6 : GraphFormat::edge_list;
}

// --- edge lists --------------------------------------------------------------

namespace {

std::uint64_t read_number(std::string_view line, std::size_t& pos, std::size_t line_no) {
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
  if (ec != std::errc{}) throw ParseError("edge list: expected a number on line " + std::to_string(line_no), pos);
  pos = static_cast<std::size_t>(end - line.data());
  return value;
}

void expect_end(std::string_view line, std::size_t pos, std::size_t line_no) {
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
  if (pos != line.size()) throw ParseError("edge list: trailing text on line " + std::to_string(line_no), pos);
}

bool skippable(std::string_view line) {
  auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!skippable(line)) return true;
    }
    return false;
  };
  if (!next()) throw ParseError("edge list: missing header", 0);
  std::size_t pos = 0;
  const auto n = read_number(line, pos, line_no);
  const auto m = read_number(line, pos, line_no);
  expect_end(line, pos, line_no);
  if (n > (1u << 24)) throw ParseError("edge list: order too large on line " + std::to_string(line_no), 0);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!next()) throw ParseError("edge list: expected " + std::to_string(m) + " edges, found " + std::to_string(i), line_no);
    pos = 0;
    auto u = read_number(line, pos, line_no);
    auto v = read_number(line, pos, line_no);
    expect_end(line, pos, line_no);
    if (u >= v || v >= n) throw ParseError("edge list: need u < v < n on line " + std::to_string(line_no), 0);
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (next()) throw ParseError("edge list: unexpected content after the last edge on line " + std::to_string(line_no), 0);
  Graph g(n, edges);
  if (g.edge_count() != m) throw ParseError("edge list: repeated edge", line_no);
  return g;
}

Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_edge_list(in);
}

std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  auto edges = g.edges();
  out << g.order() << ' ' << edges.size() << '\n';
  for (auto [u, v] : edges) out << u << ' ' << v << '\n';
  return out.str();
}

// --- graph6 --------------------------------------------------------------------

std::string to_graph6(const Graph& g) {
  const auto n = g.order();
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else if (n <= 258047) {
    out.push_back(126);
    for (int shift = 12; shift >= 0; shift -= 6) out.push_back(static_cast<char>(((n >> shift) & 63) + 63));
  } else {
    throw InvalidArgument("graph6: order above 258047 is not supported");
  }
  int acc = 0, filled = 0;
  for (Vertex j = 1; j < n; ++j)
    for (Vertex i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
      if (++filled == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = filled = 0;
      }
    }
  if (filled > 0) out.push_back(static_cast<char>((acc << (6 - filled)) + 63));
  return out;
}

Graph from_graph6(std::string_view text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
  if (text.starts_with(">>graph6<<")) throw ParseError("graph6: headers are not accepted", 0);
  if (text.empty()) throw ParseError("graph6: empty input", 0);
  auto byte = [&](std::size_t pos) {
    if (pos >= text.size()) throw ParseError("graph6: truncated input", pos);
    int c = static_cast<unsigned char>(text[pos]);
    if (c < 63 || c > 126) throw ParseError("graph6: byte outside 63..126", pos);
    return c - 63;
  };
  std::size_t n = 0, pos = 0;
  if (byte(0) < 63) {
    n = static_cast<std::size_t>(byte(0));
    pos = 1;
  } else {
    if (text.size() > 1 && text[1] == 126) throw ParseError("graph6: orders above 258047 are not supported", 1);
    n = static_cast<std::size_t>(byte(1) << 12 | byte(2) << 6 | byte(3));
    pos = 4;
    if (n <= 62) throw ParseError("graph6: long form used for a small order", 0);
  }
  const std::size_t bits = n * (n - (n > 0 ? 1 : 0)) / 2;
  const std::size_t bytes = (bits + 5) / 6;
  if (text.size() != pos + bytes)
    throw ParseError("graph6: expected " + std::to_string(pos + bytes) + " bytes, found " + std::to_string(text.size()),
                     std::min(text.size(), pos + bytes));
  std::vector<Edge> edges;
  std::size_t k = 0;
  for (Vertex j = 1; j < n; ++j)
    for (Vertex i = 0; i < j; ++i, ++k)
      if ((byte(pos + k / 6) >> (5 - k % 6)) & 1) edges.emplace_back(i, j);
  if (bits % 6 != 0) {
    const int pad = static_cast<int>(6 - bits % 6);
    if (byte(pos + bytes - 1) & ((1 << pad) - 1)) throw ParseError("graph6: nonzero padding bits", pos + bytes - 1);
  }
  return Graph(n, edges);
}

// --- files -----------------------------------------------------------------------

Graph read_graph(const std::filesystem::path& path, GraphFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  if (format == GraphFormat::edge_list) return read_edge_list(in);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_graph6(text);
}

Graph read_graph(const std::filesystem::path& path) { return read_graph(path, format_for(path)); }

void write_graph(const std::filesystem::path& path, const Graph& g, GraphFormat format) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  if (format == GraphFormat::graph6) {
    out << to_graph6(g) << '\n';
  } else {
    out << write_edge_list(g);
  }
  if (!out) throw Error("write failed for " + path.string());
}

void write_graph(const std::filesystem::path& path, const Graph& g) { write_graph(path, g, format_for(path)); }

}  // namespace rtt

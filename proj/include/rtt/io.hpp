#pragma once

#include "rtt/graph.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace rtt {

enum class GraphFormat { edge_list, graph6 };

GraphFormat parse_format(std::string_view name);
std::string_view to_string(GraphFormat f);
/// ".g6" selects graph6, anything else the edge list.
GraphFormat format_for(const std::filesystem::path& path);

/// First line `n m`, then m lines `u v` with u < v. Blank lines and lines
/// starting with '#' are skipped.
Graph read_edge_list(std::istream& in);
Graph parse_edge_list(std::string_view text);
std::string write_edge_list(const Graph& g);

/// Header-free graph6; orders above 62 use the 126-prefixed long form.
std::string to_graph6(const Graph& g);
Graph from_graph6(std::string_view text);

Graph read_graph(const std::filesystem::path& path, GraphFormat format);
Graph read_graph(const std::filesystem::path& path);
void write_graph(const std::filesystem::path& path, const Graph& g, GraphFormat format);
void write_graph(const std::filesystem::path& path, const Graph& g);

}  // namespace rtt

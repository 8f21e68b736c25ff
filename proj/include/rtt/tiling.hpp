#pragma once

#include "rtt/pattern.hpp"

#include <functional>
#include <optional>

namespace rtt {

struct Tiling {
  std::vector<PatternCopy> copies;
  /// Vertices of the solved region not covered by any copy.
  std::vector<Vertex> uncovered;
};

struct SolveOutcome {
  Tiling tiling;
  bool optimal = false;
  std::uint64_t nodes = 0;
  double wall_ms = 0;
  /// Proven bound on the number of copies (equals the size when optimal).
  std::size_t upper_bound = 0;
};

struct SolveOptions {
  std::uint64_t budget = default_node_budget;
  /// Restrict the host to these vertices; empty means all.
  std::optional<Bits> within;
  /// Stop as soon as this many copies are found.
  std::optional<std::size_t> target;
  /// Only copies accepted by the filter may be used.
  std::function<bool(const PatternCopy&)> filter;
};

/// Maximum F-tiling by branch and bound on the lowest-index open vertex.
SolveOutcome max_tiling(const Graph& g, const Pattern& f, std::uint64_t budget = default_node_budget);
SolveOutcome max_tiling(const Graph& g, const Pattern& f, const SolveOptions& options);

Verdict has_factor(const Graph& g, const Pattern& f, std::uint64_t budget = default_node_budget);
/// Whether G[within] has an F-factor.
Verdict has_factor(const Graph& g, const Pattern& f, const Bits& within,
                   std::uint64_t budget = default_node_budget);

struct GapRecord {
  std::size_t uncovered = 0;
  std::size_t allowance = 0;
  /// yes/no when certified; unknown when the solver ran out of budget and the
  /// best tiling found does not already meet the allowance.
  Verdict quasiperfect = Verdict::unknown;
  bool optimal = false;
};

/// floor(1/eta) * (k-1).
std::size_t quasiperfect_allowance(const Pattern& f, const Rational& eta);
GapRecord quasiperfect_gap(const Graph& g, const Pattern& f, const Rational& eta,
                           std::uint64_t budget = default_node_budget);
GapRecord quasiperfect_gap(const Graph& g, const Pattern& f, const Rational& eta,
                           const SolveOutcome& solved);

/// Re-checks a tiling from scratch: valid copies, pairwise disjoint, inside
/// `region`, and uncovered equal to the rest of the region.
bool verify_tiling(const Graph& g, const Pattern& f, const Tiling& t, const Bits& region);

}  // namespace rtt

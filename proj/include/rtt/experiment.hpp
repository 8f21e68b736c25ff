#pragma once

#include "rtt/common.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rtt {

/// Flat `key = value` configuration. `construction` may reference `{n}`,
/// `{seed}` or any other sweep or scalar key; `sweep.<key> = a, b, c` adds
/// an axis to the cross product (the last axis varies fastest).
struct ExperimentConfig {
  std::string construction;
  std::string input;  ///< graph file used instead of a construction
  std::string pattern = "K3";
  Rational eta{1, 5};
  std::optional<Rational> alpha;
  std::size_t r = 2;
  std::uint64_t solver_budget = default_node_budget;
  std::uint64_t alpha_budget = 1'000'000;
  bool measure_alpha = true;
  std::uint64_t seed_base = 0;
  std::vector<std::pair<std::string, std::vector<std::string>>> sweeps;
  std::size_t max_points = 10'000;
  std::size_t workers = 0;  ///< 0 picks the hardware concurrency
  std::string output = "results.csv";

  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);
};

struct SweepPoint {
  std::size_t index = 0;
  std::map<std::string, std::string> values;
  std::uint64_t seed = 0;
};

/// Cross product of the sweeps in declaration order. A `seed` axis fixes the
/// seed; otherwise each point gets derive_seed(seed_base, index).
std::vector<SweepPoint> expand_sweeps(const ExperimentConfig& config);

/// Replaces `{key}` with values[key]; unknown keys are an error.
std::string substitute(std::string_view pattern, const std::map<std::string, std::string>& values);

struct ExperimentRecord {
  std::size_t point = 0;
  std::string construction;
  std::string pattern;
  std::string eta;
  std::size_t n = 0;
  std::size_t min_degree = 0;
  std::size_t r = 0;
  std::string alpha_r, alpha_r_exact, alpha_star_r, alpha_star_exact;
  std::size_t copies = 0;
  std::size_t uncovered = 0;
  std::size_t allowance = 0;
  std::string quasiperfect;
  std::string factor;
  bool optimal = false;
  std::uint64_t nodes = 0;
  double wall_ms = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";
  std::string graph_file;

  std::vector<std::string> fields(bool with_wall = true) const;
};

const std::vector<std::string>& csv_columns();
std::string csv_escape(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Runs every sweep point, writing the CSV to config.output and one graph6
/// sidecar per point under `<output stem>_graphs/`. Rows come back in sweep
/// order whatever the completion order.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

/// Measures one point; never throws, failures land in `status`.
ExperimentRecord run_point(const ExperimentConfig& config, const SweepPoint& point,
                           const std::filesystem::path& graph_dir);

struct Report {
  std::string table;
  std::string svg;
  std::size_t rows = 0;
};

/// Plain-text table (one line per row, then aggregates per construction
/// family and eta) and an SVG scatter of uncovered against n.
Report make_report(std::string_view csv_text);
Report report_file(const std::filesystem::path& csv_path);

}  // namespace rtt

// Command-line front end: generate, solve, alpha, verify-absorber, template,
// merge, experiment, report.

#include "rtt/absorption.hpp"
#include "rtt/constructions.hpp"
#include "rtt/experiment.hpp"
#include "rtt/independence.hpp"
#include "rtt/io.hpp"
#include "rtt/tiling.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace rtt;
using nlohmann::json;

namespace {

enum Exit { ok = 0, usage = 1, failed = 2, budget = 3 };

struct Globals {
  std::uint64_t seed = 0;
  std::uint64_t budget = default_node_budget;
  std::string format = "graph6";
  std::string out;
};

/// A file path, or failing that a construction literal.
Graph load_graph(const std::string& source, const Globals& g) {
  if (std::filesystem::exists(source)) return read_graph(source);
  return generate(ConstructionSpec::parse(source), g.budget).graph;
}

std::vector<Vertex> parse_vertices(const std::string& text) {
  std::vector<Vertex> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    auto item = text.substr(start, comma - start);
    if (!item.empty()) {
      std::size_t used = 0;
      auto v = std::stoul(item, &used);
      if (used != item.size()) throw InvalidArgument("bad vertex '" + item + "'");
      out.push_back(static_cast<Vertex>(v));
    }
    start = comma + 1;
  }
  return out;
}

void emit(const json& j, const Globals& g) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(g.out);
  if (!out) throw Error("cannot write " + g.out);
  out << j.dump(2) << '\n';
}

json record_json(const ConstructionRecord& r) {
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  return {{"name", r.name}, {"parameters", r.parameters}, {"seed", r.seed}, {"attempts", r.attempts},
          {"verified", r.verified}, {"metrics", metrics}};
}

int cmd_generate(const std::string& spec, const Globals& g) {
  try {
    auto made = generate(ConstructionSpec::parse(spec), g.budget);
    const auto format = parse_format(g.format);
    if (g.out.empty()) {
      std::cout << (format == GraphFormat::graph6 ? to_graph6(made.graph) + "\n" : write_edge_list(made.graph));
    } else {
      write_graph(g.out, made.graph, format);
    }
    json records = json::array();
    for (const auto& r : made.records) records.push_back(record_json(r));
    std::cerr << records.dump() << '\n';
    return ok;
  } catch (const GenerationFailure& e) {
    std::cerr << "generation failed: " << e.what() << '\n' << record_json(e.closest).dump() << '\n';
    return failed;
  }
}

int cmd_solve(const std::string& source, const std::string& pattern, const std::string& eta, const Globals& g) {
  auto graph = load_graph(source, g);
  auto f = Pattern::parse(pattern);
  auto solved = max_tiling(graph, f, g.budget);
  auto gap = quasiperfect_gap(graph, f, parse_rational(eta), solved);
  json copies = json::array();
  for (const auto& c : solved.tiling.copies) copies.push_back(c.vertices);
  emit({{"n", graph.order()},
        {"pattern", f.name()},
        {"copies", solved.tiling.copies.size()},
        {"uncovered", solved.tiling.uncovered.size()},
        {"upper_bound", solved.upper_bound},
        {"optimal", solved.optimal},
        {"nodes", solved.nodes},
        {"allowance", gap.allowance},
        {"quasiperfect", std::string(to_string(gap.quasiperfect))},
        {"tiling", copies}},
       g);
  return solved.optimal ? ok : budget;
}

int cmd_alpha(const std::string& source, std::size_t r, bool star, const Globals& g) {
  auto graph = load_graph(source, g);
  auto rep = star ? alpha_star_r(graph, r, g.budget) : alpha_r(graph, r, g.budget);
  emit({{"quantity", star ? "alpha_star_r" : "alpha_r"},
        {"r", r},
        {"value", rep.value},
        {"exact", rep.exact},
        {"upper_bound", rep.upper_bound},
        {"nodes", rep.nodes},
        {"witness", rep.witness}},
       g);
  return rep.exact ? ok : budget;
}

int cmd_verify_absorber(const std::string& source, const std::string& pattern, const std::string& s,
                        const std::string& a, std::size_t t, const Globals& g) {
  auto graph = load_graph(source, g);
  auto verdict = verify_absorber(graph, Pattern::parse(pattern), parse_vertices(s), parse_vertices(a), t, g.budget);
  emit({{"verdict", std::string(to_string(verdict))}}, g);
  return verdict == Verdict::yes ? ok : verdict == Verdict::no ? failed : budget;
}

int cmd_template(std::size_t m, const std::string& beta, std::size_t retries, const Globals& g) {
  try {
    auto t = montgomery_template(m, parse_rational(beta), g.seed, retries);
    emit({{"m", t.m},
          {"beta", format_rational(t.beta)},
          {"x", t.x},
          {"y", t.y},
          {"z", t.z},
          {"edges", t.edges},
          {"max_degree", t.max_degree},
          {"verified", t.verified},
          {"exhaustive", t.exhaustive},
          {"subsets_checked", t.subsets_checked},
          {"attempts", t.attempts}},
         g);
    return ok;
  } catch (const ConstructionFailure& e) {
    std::cerr << e.what() << '\n';
    return failed;
  }
}

int cmd_merge(const std::string& source, const std::string& pattern, const std::string& delta, std::size_t t,
              std::size_t samples, const Globals& g) {
  auto graph = load_graph(source, g);
  auto f = Pattern::parse(pattern);
  auto init = initial_partition(graph, f, parse_rational(delta), t, samples, g.seed);
  auto merged = merge_partition(graph, f, init.partition, t, init.threshold, g.budget);
  json parts = json::array();
  for (const auto& p : merged.partition.parts()) parts.push_back(members(p));
  json log = json::array();
  for (const auto& e : merged.log)
    log.push_back({{"i", e.i}, {"j", e.j}, {"s", format_vector(e.s)}, {"t", format_vector(e.t)},
                   {"strength_s", e.strength_s}, {"strength_t", e.strength_t}, {"parts_before", e.parts_before}});
  emit({{"method", init.method},
        {"threshold", init.threshold},
        {"sampled_pairs", init.sampled_pairs},
        {"initial_parts", init.partition.size()},
        {"weak_within", init.weak_within},
        {"parts", parts},
        {"merges", log}},
       g);
  return ok;
}

int cmd_experiment(const std::string& path, const Globals& g, std::size_t workers) {
  auto config = ExperimentConfig::load(path);
  if (!g.out.empty()) config.output = g.out;
  if (workers) config.workers = workers;
  auto rows = run_experiment(config);
  bool any_failed = false, any_budget = false;
  for (const auto& r : rows) {
    if (r.status.rfind("budget", 0) == 0) any_budget = true;
    else if (r.status != "ok") any_failed = true;
  }
  std::cerr << rows.size() << " rows written to " << config.output << '\n';
  return any_failed ? failed : any_budget ? budget : ok;
}

int cmd_report(const std::string& path, const Globals& g) {
  auto rep = report_file(path);
  std::cout << rep.table;
  if (!g.out.empty() && rep.rows > 0) {
    std::ofstream out(g.out);
    if (!out) throw Error("cannot write " + g.out);
    out << rep.svg;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tiling and absorption experiments on small graphs"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "base seed")->capture_default_str();
  app.add_option("--budget", g.budget, "search node budget")->capture_default_str();
  app.add_option("--format", g.format, "graph format: graph6 or edge-list")->capture_default_str();
  app.add_option("--out", g.out, "output path (stdout when omitted)");

  std::string spec, source, pattern = "K3", eta = "1/5", s_text, a_text, beta = "1/2", delta = "1/10", path;
  std::size_t r = 2, t = 1, m = 2, retries = 200, samples = 2000, workers = 0;
  bool star = false;

  auto* generate_cmd = app.add_subcommand("generate", "build a graph from a construction literal");
  generate_cmd->add_option("spec", spec, "e.g. blocker:n=24,d=4,seed=1")->required();

  auto* solve_cmd = app.add_subcommand("solve", "maximum F-tiling");
  solve_cmd->add_option("graph", source, "graph file or construction literal")->required();
  solve_cmd->add_option("--pattern", pattern)->capture_default_str();
  solve_cmd->add_option("--eta", eta)->capture_default_str();

  auto* alpha_cmd = app.add_subcommand("alpha", "alpha_r or, with --star, the partite-hole number");
  alpha_cmd->add_option("graph", source)->required();
  alpha_cmd->add_option("-r", r)->capture_default_str();
  alpha_cmd->add_flag("--star", star);

  auto* absorber_cmd = app.add_subcommand("verify-absorber", "check that A absorbs S");
  absorber_cmd->add_option("graph", source)->required();
  absorber_cmd->add_option("--pattern", pattern)->capture_default_str();
  absorber_cmd->add_option("--s", s_text, "comma-separated k-set")->required();
  absorber_cmd->add_option("--a", a_text, "comma-separated absorber")->required();
  absorber_cmd->add_option("-t", t)->capture_default_str();

  auto* template_cmd = app.add_subcommand("template", "build and verify a bipartite absorption template");
  template_cmd->add_option("-m", m)->capture_default_str();
  template_cmd->add_option("--beta", beta)->capture_default_str();
  template_cmd->add_option("--retries", retries)->capture_default_str();

  auto* merge_cmd = app.add_subcommand("merge", "reachability partition followed by merging");
  merge_cmd->add_option("graph", source)->required();
  merge_cmd->add_option("--pattern", pattern)->capture_default_str();
  merge_cmd->add_option("--delta", delta)->capture_default_str();
  merge_cmd->add_option("-t", t)->capture_default_str();
  merge_cmd->add_option("--samples", samples, "pair sample budget")->capture_default_str();

  auto* experiment_cmd = app.add_subcommand("experiment", "run a configured sweep to CSV");
  experiment_cmd->add_option("config", path)->required();
  experiment_cmd->add_option("--workers", workers);

  auto* report_cmd = app.add_subcommand("report", "summarise an experiment CSV; --out writes the SVG");
  report_cmd->add_option("csv", path)->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    auto code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*generate_cmd) return cmd_generate(spec, g);
    if (*solve_cmd) return cmd_solve(source, pattern, eta, g);
    if (*alpha_cmd) return cmd_alpha(source, r, star, g);
    if (*absorber_cmd) return cmd_verify_absorber(source, pattern, s_text, a_text, t, g);
    if (*template_cmd) return cmd_template(m, beta, retries, g);
    if (*merge_cmd) return cmd_merge(source, pattern, delta, t, samples, g);
    if (*experiment_cmd) return cmd_experiment(path, g, workers);
    if (*report_cmd) return cmd_report(path, g);
  } catch (const ResourceError& e) {
    std::cerr << "budget exhausted: " << e.what() << '\n';
    return budget;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return usage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failed;
  }
  return usage;
}

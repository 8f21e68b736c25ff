#include "rtt/absorption.hpp"
#include "rtt/constructions.hpp"
#include "rtt/experiment.hpp"
#include "rtt/independence.hpp"
#include "rtt/io.hpp"
#include "rtt/tiling.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rtt;

namespace {

Rational to_rational(const py::object& o) {
  if (py::isinstance<py::str>(o)) return parse_rational(o.cast<std::string>());
  if (py::isinstance<py::int_>(o)) return Rational(o.cast<std::int64_t>());
  if (py::hasattr(o, "numerator") && py::hasattr(o, "denominator"))
    return Rational(o.attr("numerator").cast<std::int64_t>(), o.attr("denominator").cast<std::int64_t>());
  return parse_rational(py::str(o).cast<std::string>());
}

Bits to_bits(const Graph& g, const std::vector<Vertex>& vs) {
  for (auto v : vs)
    if (v >= g.order()) throw InvalidArgument("vertex " + std::to_string(v) + " outside the graph");
  return bits_of(g.order(), vs);
}

py::dict independence_dict(const IndependenceReport& r) {
  py::dict d;
  d["r"] = r.r;
  d["value"] = r.value;
  d["exact"] = r.exact;
  d["upper_bound"] = r.upper_bound;
  d["nodes"] = r.nodes;
  d["witness"] = r.witness;
  return d;
}

py::dict record_dict(const ConstructionRecord& r) {
  py::dict metrics;
  for (const auto& [k, v] : r.metrics) metrics[py::str(k)] = v;
  py::dict d;
  d["name"] = r.name;
  d["parameters"] = r.parameters;
  d["seed"] = r.seed;
  d["attempts"] = r.attempts;
  d["verified"] = r.verified;
  d["metrics"] = metrics;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tiling, independence and absorption routines for small graphs.";

  // translators run newest first, so the base class goes in first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<HostMismatch>(m, "HostMismatch", PyExc_ValueError);
  py::register_exception<GenerationFailure>(m, "GenerationFailure", PyExc_RuntimeError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);

  py::class_<Graph>(m, "Graph")
      .def(py::init<std::size_t, const std::vector<Edge>&, std::string>(), py::arg("n"), py::arg("edges"),
           py::arg("label") = "")
      .def_property_readonly("order", &Graph::order)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def_property_readonly("label", &Graph::label)
      .def("edges", &Graph::edges)
      .def("adjacent", &Graph::adjacent)
      .def("degree", &Graph::degree)
      .def("neighbors", [](const Graph& g, Vertex v) { return members(g.neighbors(v)); })
      .def("min_degree", [](const Graph& g) { return min_degree(g); })
      .def("to_graph6", [](const Graph& g) { return to_graph6(g); })
      .def_static("from_graph6", [](const std::string& s) { return from_graph6(s); })
      .def("to_edge_list", [](const Graph& g) { return write_edge_list(g); })
      .def_static("from_edge_list", [](const std::string& s) { return parse_edge_list(s); })
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__len__", &Graph::order)
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.order()) + " m=" + std::to_string(g.edge_count()) + ">";
      });

  py::class_<Pattern>(m, "Pattern")
      .def(py::init([](const std::string& literal) { return Pattern::parse(literal); }), py::arg("literal"))
      .def_property_readonly("order", &Pattern::order)
      .def_property_readonly("name", &Pattern::name)
      .def_property_readonly("kind", [](const Pattern& p) { return std::string(to_string(p.kind())); })
      .def("edges", &Pattern::edges)
      .def("__repr__", [](const Pattern& p) { return "<Pattern " + p.name() + ">"; });

  m.def("read_graph", [](const std::string& path) { return read_graph(path); }, py::arg("path"));
  m.def("write_graph", [](const std::string& path, const Graph& g) { write_graph(path, g); }, py::arg("path"),
        py::arg("graph"));

  m.def(
      "generate",
      [](const std::string& spec, std::uint64_t budget) {
        auto out = generate(ConstructionSpec::parse(spec), budget);
        py::list records;
        for (const auto& r : out.records) records.append(record_dict(r));
        return py::make_tuple(out.graph, records);
      },
      py::arg("spec"), py::arg("budget") = default_node_budget,
      "Builds a graph from a construction literal; returns (graph, records).");

  m.def(
      "max_tiling",
      [](const Graph& g, const Pattern& f, std::uint64_t budget) {
        SolveOutcome s;
        {
          py::gil_scoped_release release;
          s = max_tiling(g, f, budget);
        }
        py::list copies;
        for (const auto& c : s.tiling.copies) copies.append(c.vertices);
        py::dict d;
        d["copies"] = copies;
        d["uncovered"] = s.tiling.uncovered;
        d["optimal"] = s.optimal;
        d["upper_bound"] = s.upper_bound;
        d["nodes"] = s.nodes;
        return d;
      },
      py::arg("graph"), py::arg("pattern"), py::arg("budget") = default_node_budget);

  m.def(
      "has_factor",
      [](const Graph& g, const Pattern& f, std::uint64_t budget) {
        py::gil_scoped_release release;
        return std::string(to_string(has_factor(g, f, budget)));
      },
      py::arg("graph"), py::arg("pattern"), py::arg("budget") = default_node_budget,
      "Returns 'yes', 'no' or 'unknown'.");

  m.def(
      "quasiperfect_gap",
      [](const Graph& g, const Pattern& f, const py::object& eta, std::uint64_t budget) {
        auto r = quasiperfect_gap(g, f, to_rational(eta), budget);
        py::dict d;
        d["uncovered"] = r.uncovered;
        d["allowance"] = r.allowance;
        d["quasiperfect"] = std::string(to_string(r.quasiperfect));
        d["optimal"] = r.optimal;
        return d;
      },
      py::arg("graph"), py::arg("pattern"), py::arg("eta"), py::arg("budget") = default_node_budget);

  m.def(
      "alpha_r", [](const Graph& g, std::size_t r, std::uint64_t budget) { return independence_dict(alpha_r(g, r, budget)); },
      py::arg("graph"), py::arg("r"), py::arg("budget") = default_node_budget);
  m.def(
      "alpha_star_r",
      [](const Graph& g, std::size_t r, std::uint64_t budget) { return independence_dict(alpha_star_r(g, r, budget)); },
      py::arg("graph"), py::arg("r"), py::arg("budget") = default_node_budget);

  m.def(
      "second_eigenvalue",
      [](const Graph& g) {
        auto s = second_eigenvalue(g);
        py::dict d;
        d["d"] = s.d ? py::cast(*s.d) : py::none();
        d["lambda"] = s.lambda;
        d["lambda2"] = s.lambda2;
        d["lambda_n"] = s.lambda_n;
        d["converged"] = s.converged;
        d["residual"] = s.residual;
        d["method"] = s.method;
        return d;
      },
      py::arg("graph"));

  m.def(
      "verify_absorber",
      [](const Graph& g, const Pattern& f, const std::vector<Vertex>& s, const std::vector<Vertex>& a, std::size_t t) {
        return std::string(to_string(verify_absorber(g, f, s, a, t)));
      },
      py::arg("graph"), py::arg("pattern"), py::arg("s"), py::arg("a"), py::arg("t") = 1);

  m.def(
      "connectors",
      [](const Graph& g, const Pattern& f, Vertex u, Vertex v, std::size_t t, std::size_t target) {
        return find_disjoint_connectors(g, f, u, v, t, target).connectors();
      },
      py::arg("graph"), py::arg("pattern"), py::arg("u"), py::arg("v"), py::arg("t") = 1, py::arg("target") = 2);

  m.def(
      "montgomery_template",
      [](std::size_t mm, const py::object& beta, std::uint64_t seed, std::size_t retries) {
        auto t = montgomery_template(mm, to_rational(beta), seed, retries);
        py::dict d;
        d["m"] = t.m;
        d["x"] = t.x;
        d["y"] = t.y;
        d["z"] = t.z;
        d["edges"] = t.edges;
        d["max_degree"] = t.max_degree;
        d["verified"] = t.verified;
        d["exhaustive"] = t.exhaustive;
        d["subsets_checked"] = t.subsets_checked;
        return d;
      },
      py::arg("m"), py::arg("beta"), py::arg("seed") = 0, py::arg("retries") = 200);

  m.def(
      "build_absorbing_set",
      [](const Graph& g, const Pattern& f, const py::object& gamma, std::size_t mm, const py::object& beta,
         std::uint64_t seed, const std::vector<Vertex>& scope) {
        AbsorbingParams p;
        p.gamma = to_rational(gamma);
        p.m = mm;
        p.beta = to_rational(beta);
        p.seed = seed;
        if (!scope.empty()) p.scope = to_bits(g, scope);
        auto a = build_absorbing_set(g, f, p);
        py::dict d;
        d["vertices"] = members(a.vertices);
        d["capacity"] = a.capacity;
        d["ledger"] = a.ledger.dump();
        return d;
      },
      py::arg("graph"), py::arg("pattern"), py::arg("gamma") = 1, py::arg("m") = 2, py::arg("beta") = "3/2",
      py::arg("seed") = 0, py::arg("scope") = std::vector<Vertex>{});

  m.def(
      "partition",
      [](const Graph& g, const Pattern& f, const py::object& delta, std::size_t t, std::size_t samples,
         std::uint64_t seed) {
        InitialPartition init{.partition = VertexPartition::trivial(g)};
        MergeResult merged{VertexPartition::trivial(g), {}};
        {
          py::gil_scoped_release release;
          init = initial_partition(g, f, to_rational(delta), t, samples, seed);
          merged = merge_partition(g, f, init.partition, t, init.threshold);
        }
        std::vector<std::vector<Vertex>> parts;
        for (const auto& p : merged.partition.parts()) parts.push_back(members(p));
        py::dict d;
        d["parts"] = parts;
        d["initial_parts"] = init.partition.size();
        d["threshold"] = init.threshold;
        d["merges"] = merged.log.size();
        return d;
      },
      py::arg("graph"), py::arg("pattern"), py::arg("delta"), py::arg("t") = 1, py::arg("samples") = 2000,
      py::arg("seed") = 0);

  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::string& output) {
        auto c = ExperimentConfig::parse(config_text);
        c.output = output;
        std::vector<std::vector<std::string>> rows;
        {
          py::gil_scoped_release release;
          for (const auto& r : run_experiment(c)) rows.push_back(r.fields());
        }
        py::list out;
        for (const auto& fields : rows) {
          py::dict d;
          for (std::size_t i = 0; i < fields.size(); ++i) d[py::str(csv_columns()[i])] = fields[i];
          out.append(d);
        }
        return out;
      },
      py::arg("config"), py::arg("output"));
}

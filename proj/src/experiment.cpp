#include "rtt/experiment.hpp"

#include "rtt/constructions.hpp"
#include "rtt/independence.hpp"
#include "rtt/io.hpp"
#include "rtt/tiling.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace rtt {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_count(const std::string& value, std::size_t line) {
  std::uint64_t out = 0;
  std::size_t used = 0;
  try {
    // allow 1e7 style budgets
    auto d = std::stod(value, &used);
    if (used != value.size() || d < 0 || d != std::floor(d)) throw std::invalid_argument("");
    out = static_cast<std::uint64_t>(d);
  } catch (const std::exception&) {
    throw ParseError("config: expected a nonnegative integer, got '" + value + "' on line " + std::to_string(line), 0);
  }
  return out;
}

bool parse_bool(const std::string& value, std::size_t line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParseError("config: expected true or false on line " + std::to_string(line), 0);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    auto item = trim(s.substr(start, comma - start));
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  return out;
}

std::string family_of(const std::string& construction) {
  auto colon = construction.find(':');
  return colon == std::string::npos ? construction : construction.substr(0, colon);
}

}  // namespace

// --- configuration ------------------------------------------------------------

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig c;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  std::set<std::string> seen;
  while (std::getline(in, raw)) {
    ++line;
    auto body = trim(raw);
    if (body.empty() || body.front() == '#') continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("config: missing '=' on line " + std::to_string(line), 0);
    auto key = trim(std::string_view(body).substr(0, eq));
    auto value = trim(std::string_view(body).substr(eq + 1));
    if (!seen.insert(key).second) throw ParseError("config: repeated key '" + key + "' on line " + std::to_string(line), 0);
    try {
      if (key.starts_with("sweep.")) {
        auto name = key.substr(6);
        auto values = split_list(value);
        if (name.empty() || values.empty())
          throw ParseError("config: empty sweep on line " + std::to_string(line), 0);
        if (name == "eta" || name == "alpha")
          for (auto& v : values) v = format_rational(parse_rational(v));
        c.sweeps.emplace_back(name, std::move(values));
      } else if (key == "construction") {
        c.construction = value;
      } else if (key == "input") {
        c.input = value;
      } else if (key == "pattern") {
        c.pattern = value;
      } else if (key == "eta") {
        c.eta = parse_rational(value);
      } else if (key == "alpha") {
        c.alpha = parse_rational(value);
      } else if (key == "r") {
        c.r = parse_count(value, line);
      } else if (key == "solver_budget" || key == "budget") {
        c.solver_budget = parse_count(value, line);
      } else if (key == "alpha_budget") {
        c.alpha_budget = parse_count(value, line);
      } else if (key == "measure_alpha") {
        c.measure_alpha = parse_bool(value, line);
      } else if (key == "seed_base" || key == "seed") {
        c.seed_base = parse_count(value, line);
      } else if (key == "max_points") {
        c.max_points = parse_count(value, line);
      } else if (key == "workers") {
        c.workers = parse_count(value, line);
      } else if (key == "output") {
        c.output = value;
      } else {
        throw ParseError("config: unknown key '" + key + "' on line " + std::to_string(line), 0);
      }
    } catch (const InvalidArgument& e) {
      throw ParseError("config: " + std::string(e.what()) + " on line " + std::to_string(line), 0);
    }
  }
  if (c.construction.empty() == c.input.empty())
    throw ParseError("config: exactly one of 'construction' and 'input' is required", 0);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::vector<SweepPoint> expand_sweeps(const ExperimentConfig& config) {
  std::size_t total = 1;
  for (const auto& [name, values] : config.sweeps) {
    if (total > config.max_points / values.size() + 1) total = config.max_points + 1;
    else total *= values.size();
  }
  if (total > config.max_points)
    throw InvalidArgument("sweep has more than " + std::to_string(config.max_points) + " points");
  std::vector<SweepPoint> out;
  std::vector<std::size_t> at(config.sweeps.size(), 0);
  for (std::size_t index = 0; index < total; ++index) {
    SweepPoint p;
    p.index = index;
    for (std::size_t a = 0; a < config.sweeps.size(); ++a) p.values[config.sweeps[a].first] = config.sweeps[a].second[at[a]];
    auto fixed = p.values.find("seed");
    p.seed = fixed != p.values.end() ? parse_count(fixed->second, 0) : derive_seed(config.seed_base, index);
    out.push_back(std::move(p));
    for (std::size_t a = config.sweeps.size(); a-- > 0;) {
      if (++at[a] < config.sweeps[a].second.size()) break;
      at[a] = 0;
    }
  }
  return out;
}

std::string substitute(std::string_view pattern, const std::map<std::string, std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '{') {
      out.push_back(pattern[i]);
      continue;
    }
    auto close = pattern.find('}', i);
    if (close == std::string_view::npos) throw ParseError("template: unclosed '{'", i);
    auto key = std::string(pattern.substr(i + 1, close - i - 1));
    auto it = values.find(key);
    if (it == values.end()) throw ParseError("template: unknown key '" + key + "'", i);
    out += it->second;
    i = close;
  }
  return out;
}

// --- CSV --------------------------------------------------------------------------

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{
      "point",        "construction",     "pattern", "eta",       "n",         "min_degree",
      "r",            "alpha_r",          "alpha_r_exact",        "alpha_star_r",
      "alpha_star_exact", "copies",       "uncovered", "allowance", "quasiperfect", "factor",
      "optimal",      "nodes",            "wall_ms", "seed",      "status",    "graph_file"};
  return columns;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_escape(fields[i]);
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty()) throw ParseError("csv: quote inside an unquoted field", i);
      quoted = any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field.push_back(c);
      any = true;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quote", text.size());
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> ExperimentRecord::fields(bool with_wall) const {
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", wall_ms);
  return {std::to_string(point),
          construction,
          pattern,
          eta,
          std::to_string(n),
          std::to_string(min_degree),
          std::to_string(r),
          alpha_r,
          alpha_r_exact,
          alpha_star_r,
          alpha_star_exact,
          std::to_string(copies),
          std::to_string(uncovered),
          std::to_string(allowance),
          quasiperfect,
          factor,
          optimal ? "true" : "false",
          std::to_string(nodes),
          with_wall ? std::string(wall) : std::string(),
          std::to_string(seed),
          status,
          graph_file};
}

// --- running ------------------------------------------------------------------------

ExperimentRecord run_point(const ExperimentConfig& config, const SweepPoint& point,
                           const std::filesystem::path& graph_dir) {
  const auto started = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  rec.point = point.index;
  rec.seed = point.seed;

  std::map<std::string, std::string> values{{"eta", format_rational(config.eta)},
                                            {"r", std::to_string(config.r)},
                                            {"pattern", config.pattern}};
  if (config.alpha) values["alpha"] = format_rational(*config.alpha);
  for (const auto& [k, v] : point.values) values[k] = v;
  values["seed"] = std::to_string(point.seed);
  values["point"] = std::to_string(point.index);
  rec.pattern = values["pattern"];

  std::vector<std::string> inexact;
  try {
    const Rational eta = parse_rational(values["eta"]);
    rec.eta = format_rational(eta);
    rec.r = static_cast<std::size_t>(std::stoull(values["r"]));
    const auto f = Pattern::parse(rec.pattern);

    Graph g;
    if (!config.input.empty()) {
      rec.construction = substitute(config.input, values);
      g = read_graph(rec.construction);
    } else {
      rec.construction = substitute(config.construction, values);
      g = generate(ConstructionSpec::parse(rec.construction), config.solver_budget).graph;
    }
    rec.n = g.order();
    rec.min_degree = min_degree(g);

    char name[32];
    std::snprintf(name, sizeof name, "point-%05zu.g6", point.index);
    write_graph(graph_dir / name, g, GraphFormat::graph6);
    rec.graph_file = (graph_dir.filename() / name).generic_string();

    if (config.measure_alpha && rec.r >= 2 && rec.r <= g.order()) {
      auto a = alpha_r(g, rec.r, config.alpha_budget);
      rec.alpha_r = std::to_string(a.value);
      rec.alpha_r_exact = a.exact ? "true" : "false";
      auto s = alpha_star_r(g, rec.r, config.alpha_budget);
      rec.alpha_star_r = std::to_string(s.value);
      rec.alpha_star_exact = s.exact ? "true" : "false";
      if (!a.exact || !s.exact) inexact.push_back("alpha");
    }

    auto solved = max_tiling(g, f, config.solver_budget);
    rec.copies = solved.tiling.copies.size();
    rec.uncovered = solved.tiling.uncovered.size();
    rec.optimal = solved.optimal;
    rec.nodes = solved.nodes;
    auto gap = quasiperfect_gap(g, f, eta, solved);
    rec.allowance = gap.allowance;
    rec.quasiperfect = gap.quasiperfect == Verdict::yes ? "true" : gap.quasiperfect == Verdict::no ? "false" : "unknown";
    if (g.order() % f.order() != 0) rec.factor = "no";
    else if (rec.uncovered == 0) rec.factor = "yes";
    else if (solved.optimal) rec.factor = "no";
    else rec.factor = "unknown";
    if (!solved.optimal) inexact.push_back("tiling");
    if (!inexact.empty()) {
      rec.status = "budget:";
      for (std::size_t i = 0; i < inexact.size(); ++i) rec.status += (i ? "+" : "") + inexact[i];
    }
  } catch (const GenerationFailure& e) {
    rec.status = std::string("generation-failure: ") + e.what();
  } catch (const ResourceError& e) {
    rec.status = std::string("budget: ") + e.what();
  } catch (const std::exception& e) {
    rec.status = std::string("error: ") + e.what();
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  const auto points = expand_sweeps(config);
  const std::filesystem::path csv_path = config.output;
  const auto graph_dir = csv_path.parent_path() / (csv_path.stem().string() + "_graphs");
  std::filesystem::create_directories(graph_dir);

  std::vector<ExperimentRecord> records(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) records[i] = run_point(config, points[i], graph_dir);
  };
  const auto hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = std::min<std::size_t>(config.workers ? config.workers : hw, std::max<std::size_t>(1, points.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + csv_path.string());
  out << csv_line(csv_columns()) << '\n';
  for (const auto& r : records) out << csv_line(r.fields()) << '\n';
  if (!out) throw Error("write failed for " + csv_path.string());
  return records;
}

// --- reporting ----------------------------------------------------------------------

namespace {

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& r) {
    std::string out;
    for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "  " : "") + (c + 1 == r.size() ? r[c] : pad(r[c], width[c]));
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string scatter_svg(const std::vector<std::tuple<std::string, double, double>>& points) {
  constexpr double width = 640, height = 400, margin = 50;
  double max_x = 1, max_y = 1;
  std::vector<std::string> families;
  for (const auto& [fam, x, y] : points) {
    max_x = std::max(max_x, x);
    max_y = std::max(max_y, y);
    if (std::find(families.begin(), families.end(), fam) == families.end()) families.push_back(fam);
  }
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  auto colour = [&](const std::string& fam) {
    auto i = static_cast<std::size_t>(std::find(families.begin(), families.end(), fam) - families.begin());
    return palette[i % 7];
  };
  auto sx = [&](double x) { return margin + x / max_x * (width - 2 * margin); };
  auto sy = [&](double y) { return height - margin - y / max_y * (height - 2 * margin); };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">n (max "
      << fixed(max_x, 0) << ")</text>\n";
  out << "<text x=\"14\" y=\"" << height / 2 << "\" transform=\"rotate(-90 14 " << height / 2
      << ")\" text-anchor=\"middle\">uncovered (max " << fixed(max_y, 0) << ")</text>\n";
  for (const auto& [fam, x, y] : points)
    out << "<circle cx=\"" << fixed(sx(x), 2) << "\" cy=\"" << fixed(sy(y), 2) << "\" r=\"4\" fill=\"" << colour(fam)
        << "\"/>\n";
  for (std::size_t i = 0; i < families.size(); ++i)
    out << "<text x=\"" << width - margin - 120 << "\" y=\"" << margin + 16 * static_cast<double>(i) << "\" fill=\""
        << palette[i % 7] << "\">" << families[i] << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace

Report make_report(std::string_view csv_text) {
  Report rep;
  auto rows = parse_csv(csv_text);
  if (rows.empty()) return rep;
  if (rows.front() != csv_columns()) throw ParseError("report: CSV header does not match the experiment schema", 0);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < csv_columns().size(); ++i) col[csv_columns()[i]] = i;

  static const std::vector<std::string> shown{"point",     "construction", "n",           "eta",
                                              "alpha_r",   "alpha_star_r", "copies",      "uncovered",
                                              "allowance", "quasiperfect", "factor",      "status"};
  std::vector<std::vector<std::string>> table;
  std::vector<std::tuple<std::string, double, double>> points;
  struct Group {
    std::size_t rows = 0, quasi = 0, max_uncovered = 0;
    double sum = 0;
  };
  std::map<std::pair<std::string, std::string>, Group> groups;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != csv_columns().size())
      throw ParseError("report: row " + std::to_string(i) + " has " + std::to_string(r.size()) + " fields", i);
    std::vector<std::string> line;
    for (const auto& c : shown) line.push_back(r[col[c]]);
    table.push_back(std::move(line));
    if (r[col["status"]].rfind("ok", 0) != 0 && r[col["status"]].rfind("budget", 0) != 0) continue;
    const auto fam = family_of(r[col["construction"]]);
    const auto n = std::stod(r[col["n"]]);
    const auto unc = std::stoull(r[col["uncovered"]]);
    points.emplace_back(fam, n, static_cast<double>(unc));
    auto& g = groups[{fam, r[col["eta"]]}];
    ++g.rows;
    g.sum += static_cast<double>(unc);
    g.max_uncovered = std::max<std::size_t>(g.max_uncovered, unc);
    if (r[col["quasiperfect"]] == "true") ++g.quasi;
  }
  rep.rows = table.size();
  rep.table = render_table(shown, table);
  if (rep.rows > 1 && !groups.empty()) {
    std::vector<std::vector<std::string>> agg;
    for (const auto& [key, g] : groups)
      agg.push_back({key.first, key.second, std::to_string(g.rows), fixed(g.sum / static_cast<double>(g.rows), 2),
                     std::to_string(g.max_uncovered), std::to_string(g.quasi) + "/" + std::to_string(g.rows)});
    rep.table += "\n" + render_table({"family", "eta", "rows", "mean_uncovered", "max_uncovered", "quasiperfect"}, agg);
  }
  rep.svg = scatter_svg(points);
  return rep;
}

Report report_file(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw Error("cannot open " + csv_path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return make_report(buf.str());
}

}  // namespace rtt

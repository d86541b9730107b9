#include "kp/sweeps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "kp/errors.hpp"
#include "kp/io.hpp"
#include "kp/parallel.hpp"
#include "kp/wavefunction.hpp"

namespace kp {

HeightSpec HeightSpec::uniform(double h) {
  HeightSpec s;
  s.kind = Kind::Uniform;
  s.first = h;
  return s;
}

HeightSpec HeightSpec::alternating(double h1, double h2) {
  HeightSpec s;
  s.kind = Kind::Alternating;
  s.first = h1;
  s.second = h2;
  return s;
}

HeightSpec HeightSpec::random(double h_min, double h_max, std::uint64_t seed) {
  HeightSpec s;
  s.kind = Kind::Random;
  s.first = h_min;
  s.second = h_max;
  s.seed = seed;
  return s;
}

HeightSpec HeightSpec::explicit_values(std::vector<double> h) {
  HeightSpec s;
  s.kind = Kind::Explicit;
  s.values = std::move(h);
  return s;
}

std::vector<double> HeightSpec::heights(std::size_t count) const {
  switch (kind) {
    case Kind::Uniform: return std::vector<double>(count, first);
    case Kind::Alternating: return alternating_heights(count, first, second);
    case Kind::Random: return random_heights(count, first, second, seed);
    case Kind::Explicit:
      if (values.size() != count) {
        throw Error(Errc::InvalidArgument, "explicit heights do not match the scatterer count");
      }
      return values;
  }
  return {};
}

nlohmann::json to_json(const HeightSpec& s) {
  switch (s.kind) {
    case HeightSpec::Kind::Uniform: return {{"uniform", s.first}};
    case HeightSpec::Kind::Alternating: return {{"alternating", {s.first, s.second}}};
    case HeightSpec::Kind::Random:
      return {{"random", {{"h_min", s.first}, {"h_max", s.second}, {"seed", s.seed}}}};
    case HeightSpec::Kind::Explicit: return {{"explicit", s.values}};
  }
  return {};
}

HeightSpec height_spec_from_json(const nlohmann::json& obj) {
  if (!obj.is_object() || obj.size() != 1) {
    throw Error(Errc::ConfigError, "heights must be an object with exactly one key");
  }
  if (obj.contains("uniform") && obj.at("uniform").is_number()) {
    return HeightSpec::uniform(obj.at("uniform").get<double>());
  }
  if (obj.contains("alternating")) {
    const auto& pair = obj.at("alternating");
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw Error(Errc::ConfigError, "\"alternating\" needs two heights");
    }
    return HeightSpec::alternating(pair[0].get<double>(), pair[1].get<double>());
  }
  if (obj.contains("random")) {
    const auto& r = obj.at("random");
    return HeightSpec::random(json_number(r, "h_min"), json_number(r, "h_max"), json_seed(r, "seed"));
  }
  if (obj.contains("explicit")) {
    const auto& list = obj.at("explicit");
    if (!list.is_array()) throw Error(Errc::ConfigError, "\"explicit\" must be a list");
    std::vector<double> h;
    for (const auto& v : list) {
      if (!v.is_number()) throw Error(Errc::ConfigError, "\"explicit\" heights must be numbers");
      h.push_back(v.get<double>());
    }
    return HeightSpec::explicit_values(std::move(h));
  }
  throw Error(Errc::ConfigError, "unrecognised height specification");
}

ParamGrid ParamGrid::linspace(double start, double stop, std::size_t points) {
  ParamGrid g;
  g.start = start;
  g.stop = stop;
  g.points = points;
  return g;
}

ParamGrid ParamGrid::of(std::vector<double> values) {
  ParamGrid g;
  g.list = std::move(values);
  return g;
}

std::vector<double> ParamGrid::values() const {
  if (!list.empty() || points == 0) return list;
  if (points == 1) return {start};
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  v.back() = stop;
  return v;
}

nlohmann::json to_json(const ParamGrid& g) {
  if (!g.list.empty()) return g.list;
  return {{"start", g.start}, {"stop", g.stop}, {"points", g.points}};
}

ParamGrid param_grid_from_json(const nlohmann::json& obj) {
  if (obj.is_array()) {
    std::vector<double> v;
    for (const auto& x : obj) {
      if (!x.is_number()) throw Error(Errc::ConfigError, "grid values must be numbers");
      v.push_back(x.get<double>());
    }
    if (v.empty()) throw Error(Errc::ConfigError, "grid must not be empty");
    return ParamGrid::of(std::move(v));
  }
  const auto points = json_count(obj, "points");
  if (points == 0) throw Error(Errc::ConfigError, "grid needs at least one point");
  return ParamGrid::linspace(json_number(obj, "start"), json_number(obj, "stop"), points);
}

nlohmann::json to_json(const ShiftSweep& s) {
  nlohmann::json j = {{"kind", "shift"},          {"L", s.length},
                      {"M", s.count},             {"heights", to_json(s.heights)},
                      {"delta", to_json(s.deltas)}, {"k_max", s.k_max}};
  if (s.edge_fraction > 0.0) j["edge_fraction"] = s.edge_fraction;
  return j;
}

nlohmann::json to_json(const FluxSweep& s) {
  nlohmann::json j = {{"kind", "flux"},   {"L", flux_length(s)}, {"M", s.count},
                      {"h_min", s.h_min}, {"h_max", s.h_max},    {"phi", to_json(s.phis)},
                      {"k_max", s.k_max}};
  if (s.edge_fraction > 0.0) j["edge_fraction"] = s.edge_fraction;
  return j;
}

ShiftSweep shift_sweep_from_json(const nlohmann::json& obj) {
  ShiftSweep s;
  s.length = json_number(obj, "L");
  s.count = json_count(obj, "M");
  if (!obj.contains("heights")) throw Error(Errc::ConfigError, "shift sweep needs \"heights\"");
  s.heights = height_spec_from_json(obj.at("heights"));
  if (obj.contains("delta")) s.deltas = param_grid_from_json(obj.at("delta"));
  s.k_max = json_number(obj, "k_max");
  s.edge_fraction = json_number_or(obj, "edge_fraction", 0.0);
  return s;
}

FluxSweep flux_sweep_from_json(const nlohmann::json& obj) {
  FluxSweep s;
  s.count = json_count(obj, "M");
  s.length = json_number_or(obj, "L", 0.0);
  s.h_min = json_number(obj, "h_min");
  s.h_max = json_number(obj, "h_max");
  if (obj.contains("phi")) {
    s.phis = param_grid_from_json(obj.at("phi"));
  } else {
    s.phis = ParamGrid::linspace(0.0, flux_period(s.count), 300);
  }
  s.k_max = json_number(obj, "k_max");
  s.edge_fraction = json_number_or(obj, "edge_fraction", 0.0);
  return s;
}

double flux_length(const FluxSweep& s) noexcept {
  return s.length > 0.0 ? s.length : static_cast<double>(s.count + 1);
}

double sweep_edge_fraction(double requested, std::size_t count) noexcept {
  if (requested > 0.0) return requested;
  return count <= 2 ? 0.5 : 1.0 / static_cast<double>(count);
}

std::vector<SweepRow> SweepTable::at(double value) const {
  std::vector<SweepRow> out;
  for (const auto& r : rows) {
    if (r.param_value == value) out.push_back(r);
  }
  return out;
}

namespace {

std::string with_param(const char* name, double value, const std::string& detail) {
  return std::string(name) + " = " + format_double(value) + ": " + detail;
}

// One parameter point: roots, states and edge weights.
std::vector<SweepRow> solve_point(const ScattererSet& set, double value, double k_max,
                                  double edge_fraction, SolverOptions options) {
  options.workers = 1;
  const auto roots = find_roots(set, k_max, options);
  const std::size_t bound = bound_state_count(set, options);
  std::vector<SweepRow> rows;
  rows.reserve(roots.size());
  for (std::size_t j = 0; j < roots.size(); ++j) {
    const EigenState state = build_state(set, roots[j]);
    rows.push_back({value, bound + j + 1, roots[j].k, roots[j].energy, edge_weight(state, edge_fraction)});
  }
  return rows;
}

template <class Build>
SweepTable run_sweep(const char* name, const std::vector<double>& values, double k_max,
                     double edge_fraction, const SolverOptions& options, Build build) {
  if (!(k_max > 0.0)) throw Error(Errc::InvalidArgument, "k_max must be positive");
  std::vector<std::vector<SweepRow>> parts(values.size());
  parallel_for(values.size(), options.workers, [&](std::size_t i) {
    try {
      parts[i] = solve_point(build(values[i]), values[i], k_max, edge_fraction, options);
    } catch (const Error& e) {
      throw Error(e.code(), with_param(name, values[i], e.detail()));
    }
  });
  SweepTable table;
  table.param = name;
  for (auto& p : parts) table.rows.insert(table.rows.end(), p.begin(), p.end());
  return table;
}

}  // namespace

SweepTable sweep_shift(const ShiftSweep& sweep, const SolverOptions& options) {
  const auto deltas = sweep.deltas.values();
  if (deltas.empty()) throw Error(Errc::InvalidArgument, "empty shift grid");
  for (double d : deltas) {
    if (!(d >= -1.0 && d <= 1.0)) {
      throw Error(Errc::InvalidArgument, with_param("delta", d, "outside [-1, 1]"));
    }
  }
  const auto heights = sweep.heights.heights(sweep.count);
  const double f = sweep_edge_fraction(sweep.edge_fraction, sweep.count);
  SweepTable table = run_sweep("delta", deltas, sweep.k_max, f, options, [&](double delta) {
    return uniform_lattice(sweep.length, heights, delta);
  });
  table.provenance = {{"command", "sweep"},
                      {"sweep", to_json(sweep)},
                      {"solver", to_json(options)},
                      {"version", std::string(version())}};
  return table;
}

SweepTable sweep_flux(const FluxSweep& sweep, const SolverOptions& options) {
  const auto phis = sweep.phis.values();
  if (phis.empty()) throw Error(Errc::InvalidArgument, "empty flux grid");
  const double period = flux_period(sweep.count);
  for (double phi : phis) {
    if (!(phi >= 0.0 && phi <= period * (1.0 + 1e-12))) {
      throw Error(Errc::InvalidArgument, with_param("phi", phi, "outside [0, (M + 1) / 2]"));
    }
  }
  const double length = flux_length(sweep);
  const double f = sweep_edge_fraction(sweep.edge_fraction, sweep.count);
  SweepTable table = run_sweep("phi", phis, sweep.k_max, f, options, [&](double phi) {
    return modulated_lattice(length, sweep.count, sweep.h_min, sweep.h_max, phi);
  });
  table.provenance = {{"command", "sweep"},
                      {"sweep", to_json(sweep)},
                      {"solver", to_json(options)},
                      {"version", std::string(version())}};
  return table;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  out << "# provenance: " << table.provenance.dump() << '\n';
  out << "param,param_value,state_index,k,energy,edge_weight\n";
  for (const auto& r : table.rows) {
    out << table.param << ',' << format_double(r.param_value) << ',' << r.state_index << ','
        << format_double(r.k) << ',' << format_double(r.energy) << ','
        << format_double(r.edge_weight) << '\n';
  }
}

void write_json(const SweepTable& table, std::ostream& out) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({r.param_value, r.state_index, r.k, r.energy, r.edge_weight});
  }
  const nlohmann::json doc = {
      {"provenance", table.provenance},
      {"param", table.param},
      {"columns", {"param_value", "state_index", "k", "energy", "edge_weight"}},
      {"rows", rows}};
  out << doc.dump(1) << '\n';
}

namespace {

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw Error(Errc::ConfigError, "bad number \"" + std::string(text) + "\" in table");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    parts.push_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return parts;
}

}  // namespace

SweepTable read_table(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  SweepTable table;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::ConfigError, std::string("table is not valid JSON: ") + e.what());
    }
    table.provenance = doc.value("provenance", nlohmann::json::object());
    table.param = doc.value("param", "");
    for (const auto& r : doc.at("rows")) {
      table.rows.push_back({r.at(0).get<double>(), r.at(1).get<std::size_t>(), r.at(2).get<double>(),
                            r.at(3).get<double>(), r.at(4).get<double>()});
    }
    return table;
  }
  std::istringstream lines(text);
  std::string line;
  const std::string tag = "# provenance: ";
  bool header = false;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    if (line.rfind(tag, 0) == 0) {
      try {
        table.provenance = nlohmann::json::parse(line.substr(tag.size()));
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ConfigError, std::string("bad provenance line: ") + e.what());
      }
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      if (line != "param,param_value,state_index,k,energy,edge_weight") {
        throw Error(Errc::ConfigError, "unexpected table header \"" + line + "\"");
      }
      header = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != 6) throw Error(Errc::ConfigError, "table row needs six fields");
    table.param = std::string(cells[0]);
    table.rows.push_back({parse_double(cells[1]),
                          static_cast<std::size_t>(parse_double(cells[2])), parse_double(cells[3]),
                          parse_double(cells[4]), parse_double(cells[5])});
  }
  if (!header) throw Error(Errc::ConfigError, "table has no header line");
  return table;
}

}  // namespace kp

#include "kp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "kp/eigensolve.hpp"
#include "kp/errors.hpp"
#include "kp/io.hpp"
#include "kp/model.hpp"
#include "kp/oracle.hpp"
#include "kp/parallel.hpp"
#include "kp/sweeps.hpp"
#include "kp/topology.hpp"
#include "kp/wavefunction.hpp"

namespace kp {
namespace {

using nlohmann::json;

/// Carries an exit code out of a command together with its message.
struct Exit {
  int code;
  std::string message;
};

[[noreturn]] void config_error(const std::string& message) { throw Exit{kExitConfig, message}; }

struct Flags {
  std::string config;
  std::string out;
  std::string format;
  unsigned threads = 0;
  std::optional<std::string> box, uniform, alternating, modulated, random;
  std::optional<std::uint64_t> seed;
  std::optional<double> k_max;
  std::optional<std::size_t> state, samples;
  std::optional<std::size_t> m, n;
  std::optional<double> tol;
  std::optional<std::string> shift, flux;
  std::optional<std::size_t> points;
  std::optional<std::string> cell;
  std::optional<std::size_t> band, grid, n_x;
};

json parse_scalar(std::string_view text, std::string_view item) {
  long long i = 0;
  const char* end = text.data() + text.size();
  if (auto r = std::from_chars(text.data(), end, i); r.ec == std::errc() && r.ptr == end) return i;
  double d = 0.0;
  if (auto r = std::from_chars(text.data(), end, d); r.ec == std::errc() && r.ptr == end) return d;
  config_error("bad value in \"" + std::string(item) + "\"");
}

/// "L=11,M=11,h=0.4" -> {"L": 11, "M": 11, "h": 0.4}; "h=0.4:1.4" gives a list.
json parse_keys(const std::string& text) {
  json obj = json::object();
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      config_error("expected key=value, got \"" + std::string(item) + "\"");
    }
    const auto value = item.substr(eq + 1);
    if (value.find(':') != std::string_view::npos) {
      json list = json::array();
      std::string_view v = value;
      while (true) {
        const auto colon = v.find(':');
        list.push_back(parse_scalar(v.substr(0, colon), item));
        if (colon == std::string_view::npos) break;
        v = v.substr(colon + 1);
      }
      obj[std::string(item.substr(0, eq))] = list;
    } else {
      obj[std::string(item.substr(0, eq))] = parse_scalar(value, item);
    }
  }
  return obj;
}

/// A config file is a run configuration, a bare instance, sweep or cell, or
/// any file written by this program (its provenance is the run configuration).
json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file \"" + path + "\"");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string tag = "# provenance: ";
  json doc;
  try {
    if (text.rfind(tag, 0) == 0) {
      doc = json::parse(text.substr(tag.size(), text.find('\n') - tag.size()));
    } else {
      doc = json::parse(text);
    }
  } catch (const json::exception& e) {
    config_error("config file \"" + path + "\" is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) config_error("config file must hold a JSON object");
  if (doc.contains("provenance")) doc = doc.at("provenance");
  for (const char* key : {"command", "instance", "sweep", "cell"}) {
    if (doc.contains(key)) return doc;
  }
  if (doc.contains("kind")) return {{"sweep", doc}};
  if (doc.contains("a") && doc.contains("heights")) return {{"cell", doc}};
  return {{"instance", doc}};
}

json inline_instance(const Flags& f) {
  std::vector<std::pair<std::string, const std::optional<std::string>*>> sources = {
      {"box", &f.box},
      {"uniform", &f.uniform},
      {"alternating", &f.alternating},
      {"modulated", &f.modulated},
      {"random", &f.random}};
  json spec;
  for (const auto& [kind, value] : sources) {
    if (!value->has_value()) continue;
    if (!spec.is_null()) config_error("give exactly one instance source");
    json keys = parse_keys(**value);
    if (kind == "random") {
      if (!keys.contains("M")) config_error("--random needs M");
      if (!keys.contains("L")) keys["L"] = keys["M"];
      if (!keys.contains("h_min")) keys["h_min"] = -0.5;
      if (!keys.contains("h_max")) keys["h_max"] = 1.5;
      if (f.seed) keys["seed"] = *f.seed;
      if (!keys.contains("seed")) keys["seed"] = 0;
    }
    if (kind != "box" && !keys.contains(kind == "modulated" ? "phi" : "delta")) {
      keys[kind == "modulated" ? "phi" : "delta"] = 0;
    }
    spec = {{kind, keys}};
  }
  return spec;
}

/// Merges the config file with the command-line flags; flags win, except that
/// an instance may only come from one place.
json base_config(const std::string& command, const Flags& f) {
  json cfg = f.config.empty() ? json::object() : load_config(f.config);
  if (cfg.contains("command") && cfg.at("command") != command) {
    config_error("config file belongs to \"" + cfg.at("command").get<std::string>() + "\", not \"" +
                 command + "\"");
  }
  cfg.erase("version");
  cfg["command"] = command;
  if (!f.format.empty()) cfg["format"] = f.format;
  return cfg;
}

void require_instance(json& cfg, const Flags& f) {
  const json inline_spec = inline_instance(f);
  if (!inline_spec.is_null()) {
    if (cfg.contains("instance")) config_error("give exactly one instance source");
    cfg["instance"] = inline_spec;
  }
  if (!cfg.contains("instance")) config_error("no instance given");
}

SolverOptions solver_options(json& cfg, unsigned workers) {
  SolverOptions opts = solver_options_from_json(cfg.value("solver", json::object()));
  cfg["solver"] = to_json(opts);
  opts.workers = workers;
  return opts;
}

std::string output_format(json& cfg, const char* fallback) {
  if (!cfg.contains("format")) cfg["format"] = fallback;
  if (!cfg.at("format").is_string()) config_error("format must be \"csv\" or \"json\"");
  const auto format = cfg.at("format").get<std::string>();
  if (format != "csv" && format != "json") config_error("format must be \"csv\" or \"json\", got \"" + format + "\"");
  return format;
}

json provenance(const json& cfg) {
  json p = cfg;
  p["version"] = std::string(version());
  return p;
}

/// CSV with a provenance comment line, or {"provenance", "columns", "rows"}.
std::string render_table(const json& cfg, const std::vector<std::string>& columns,
                         const std::vector<std::vector<json>>& rows) {
  std::ostringstream os;
  if (cfg.at("format") == "json") {
    json doc = {{"provenance", provenance(cfg)}, {"columns", columns}, {"rows", rows}};
    os << doc.dump(1) << '\n';
    return os.str();
  }
  os << "# provenance: " << provenance(cfg).dump() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "");
      if (row[i].is_number_float()) {
        os << format_double(row[i].get<double>());
      } else {
        os << row[i].dump();
      }
    }
    os << '\n';
  }
  return os.str();
}

double positive_k_max(json& cfg, const Flags& f) {
  if (f.k_max) cfg["k_max"] = *f.k_max;
  const double k_max = json_number(cfg, "k_max");
  if (!(k_max > 0.0)) config_error("k_max must be positive");
  return k_max;
}

struct Outcome {
  std::string text;
  /// Non-empty when the command ran but its check failed.
  std::string failure;
};

struct Plan {
  json cfg;
  std::function<Outcome()> run;
};

Plan plan_solve(const Flags& f, unsigned workers) {
  json cfg = base_config("solve", f);
  require_instance(cfg, f);
  const ScattererSet set = instance_from_json(cfg.at("instance"));
  const double k_max = positive_k_max(cfg, f);
  const SolverOptions opts = solver_options(cfg, workers);
  output_format(cfg, "csv");
  return {cfg, [cfg, set, k_max, opts] {
            const auto roots = find_roots(set, k_max, opts);
            const std::size_t bound = bound_state_count(set, opts);
            std::vector<std::vector<json>> rows;
            for (std::size_t j = 0; j < roots.size(); ++j) {
              rows.push_back({bound + j + 1, roots[j].k, roots[j].energy});
            }
            return Outcome{render_table(cfg, {"index", "k", "energy"}, rows), {}};
          }};
}

Plan plan_wavefunction(const Flags& f, unsigned workers) {
  json cfg = base_config("wavefunction", f);
  require_instance(cfg, f);
  const ScattererSet set = instance_from_json(cfg.at("instance"));
  const double k_max = positive_k_max(cfg, f);
  if (f.state) cfg["state"] = *f.state;
  if (f.samples) cfg["samples"] = *f.samples;
  if (!cfg.contains("samples")) cfg["samples"] = 512;
  const std::size_t state = json_count(cfg, "state");
  const std::size_t samples = json_count(cfg, "samples");
  if (samples < 2) config_error("samples must be at least 2");
  const SolverOptions opts = solver_options(cfg, workers);
  output_format(cfg, "csv");
  return {cfg, [cfg, set, k_max, state, samples, opts] {
            const auto roots = find_roots(set, k_max, opts);
            const std::size_t bound = bound_state_count(set, opts);
            if (state <= bound || state > bound + roots.size()) {
              std::ostringstream os;
              os << "state " << state << " is outside the solved range " << bound + 1 << ".."
                 << bound + roots.size() << " (k_max = " << format_double(k_max) << ", " << bound
                 << " bound states)";
              throw Exit{kExitRange, os.str()};
            }
            const EigenState eigen = build_state(set, roots[state - bound - 1]);
            std::vector<std::vector<json>> rows;
            for (const auto& s : density_grid(eigen, samples)) {
              rows.push_back({s.x, s.psi.real(), s.psi.imag(), s.density});
            }
            return Outcome{render_table(cfg, {"x", "psi_re", "psi_im", "density"}, rows), {}};
          }};
}

void apply_shift_keys(ShiftSweep& s, const json& keys) {
  for (const auto& [key, value] : keys.items()) {
    if (key == "L") {
      s.length = json_number(keys, "L");
    } else if (key == "M") {
      s.count = json_count(keys, "M");
    } else if (key == "h") {
      s.heights = HeightSpec::uniform(json_number(keys, "h"));
    } else if (key == "h1" || key == "h2") {
      s.heights = HeightSpec::alternating(json_number(keys, "h1"), json_number(keys, "h2"));
    } else if (key == "h_min" || key == "h_max" || key == "seed") {
      s.heights = HeightSpec::random(json_number(keys, "h_min"), json_number(keys, "h_max"),
                                     json_seed(keys, "seed"));
    } else if (key == "delta_min" || key == "delta_max" || key == "points") {
      const auto old = s.deltas.values();
      s.deltas = ParamGrid::linspace(json_number_or(keys, "delta_min", -1.0),
                                     json_number_or(keys, "delta_max", 1.0),
                                     keys.contains("points") ? json_count(keys, "points") : old.size());
    } else if (key == "kmax" || key == "k_max") {
      s.k_max = json_number(keys, key.c_str());
    } else if (key == "edge_fraction") {
      s.edge_fraction = json_number(keys, "edge_fraction");
    } else {
      config_error("unknown shift sweep key \"" + key + "\"");
    }
  }
}

void apply_flux_keys(FluxSweep& s, const json& keys) {
  bool grid_given = false;
  for (const auto& [key, value] : keys.items()) {
    if (key == "L") {
      s.length = json_number(keys, "L");
    } else if (key == "M") {
      s.count = json_count(keys, "M");
    } else if (key == "h_min" || key == "h_max") {
      s.h_min = json_number_or(keys, "h_min", s.h_min);
      s.h_max = json_number_or(keys, "h_max", s.h_max);
    } else if (key == "phi_min" || key == "phi_max" || key == "points") {
      grid_given = true;
    } else if (key == "kmax" || key == "k_max") {
      s.k_max = json_number(keys, key.c_str());
    } else if (key == "edge_fraction") {
      s.edge_fraction = json_number(keys, "edge_fraction");
    } else {
      config_error("unknown flux sweep key \"" + key + "\"");
    }
  }
  if (grid_given || keys.contains("M")) {
    s.phis = ParamGrid::linspace(json_number_or(keys, "phi_min", 0.0),
                                 json_number_or(keys, "phi_max", flux_period(s.count)),
                                 keys.contains("points") ? json_count(keys, "points") : s.phis.values().size());
  }
}

Plan plan_sweep(const Flags& f, unsigned workers) {
  json cfg = base_config("sweep", f);
  if (f.shift && f.flux) config_error("give either --shift or --flux");
  std::string kind;
  if (cfg.contains("sweep")) kind = cfg.at("sweep").value("kind", "");
  if (f.shift || f.flux) {
    const std::string wanted = f.shift ? "shift" : "flux";
    if (!kind.empty() && kind != wanted) config_error("config file holds a " + kind + " sweep");
    kind = wanted;
  }
  if (kind != "shift" && kind != "flux") config_error("sweep needs --shift or --flux");
  const json keys = parse_keys((kind == "shift" ? f.shift : f.flux).value_or(""));
  const SolverOptions opts = solver_options(cfg, workers);
  output_format(cfg, "csv");
  if (kind == "shift") {
    ShiftSweep s = cfg.contains("sweep") ? shift_sweep_from_json(cfg.at("sweep")) : ShiftSweep{};
    apply_shift_keys(s, keys);
    if (f.k_max) s.k_max = *f.k_max;
    if (f.points) s.deltas = ParamGrid::linspace(s.deltas.values().front(), s.deltas.values().back(), *f.points);
    cfg["sweep"] = to_json(s);
    return {cfg, [cfg, s, opts] {
              SweepTable table = sweep_shift(s, opts);
              table.provenance = provenance(cfg);
              std::ostringstream os;
              cfg.at("format") == "json" ? write_json(table, os) : write_csv(table, os);
              return Outcome{os.str(), {}};
            }};
  }
  FluxSweep s = cfg.contains("sweep") ? flux_sweep_from_json(cfg.at("sweep")) : FluxSweep{};
  apply_flux_keys(s, keys);
  if (f.k_max) s.k_max = *f.k_max;
  if (f.points) s.phis = ParamGrid::linspace(s.phis.values().front(), s.phis.values().back(), *f.points);
  cfg["sweep"] = to_json(s);
  return {cfg, [cfg, s, opts] {
            SweepTable table = sweep_flux(s, opts);
            table.provenance = provenance(cfg);
            std::ostringstream os;
            cfg.at("format") == "json" ? write_json(table, os) : write_csv(table, os);
            return Outcome{os.str(), {}};
          }};
}

std::vector<double> number_list(const json& value, const char* what) {
  std::vector<double> out;
  if (value.is_number()) return {value.get<double>()};
  if (!value.is_array()) config_error(std::string(what) + " must be a number or a list");
  for (const auto& v : value) {
    if (!v.is_number()) config_error(std::string(what) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Plan plan_chern(const Flags& f, unsigned workers) {
  json cfg = base_config("chern", f);
  if (f.cell) {
    if (cfg.contains("cell")) config_error("give the cell either inline or in the config file");
    const json keys = parse_keys(*f.cell);
    for (const auto& [key, value] : keys.items()) {
      if (key != "a" && key != "h" && key != "y") config_error("unknown cell key \"" + key + "\"");
    }
    const double a = json_number(keys, "a");
    if (!keys.contains("h")) config_error("--cell needs h");
    const auto h = number_list(keys.at("h"), "h");
    std::vector<double> y;
    if (keys.contains("y")) {
      y = number_list(keys.at("y"), "y");
    } else {
      for (std::size_t i = 0; i < h.size(); ++i) y.push_back(a * static_cast<double>(i) / static_cast<double>(h.size()));
    }
    cfg["cell"] = {{"a", a}, {"positions", y}, {"heights", h}};
  }
  if (!cfg.contains("cell")) config_error("no cell given");
  const json& c = cfg.at("cell");
  if (!c.contains("positions") || !c.contains("heights")) config_error("cell needs positions and heights");
  const UnitCell cell(json_number(c, "a"), number_list(c.at("positions"), "positions"),
                      number_list(c.at("heights"), "heights"));
  if (f.band) cfg["band"] = *f.band;
  if (!cfg.contains("band")) cfg["band"] = 1;
  if (f.grid) cfg["grid"] = {*f.grid, *f.grid};
  if (!cfg.contains("grid")) cfg["grid"] = {32, 32};
  if (f.n_x) cfg["n_x"] = *f.n_x;
  if (!cfg.contains("n_x")) cfg["n_x"] = 256;
  const std::size_t band = json_count(cfg, "band");
  const json& grid = cfg.at("grid");
  if (!grid.is_array() || grid.size() != 2 || !grid[0].is_number_integer() || !grid[1].is_number_integer()) {
    config_error("grid must be [N_q, N_delta]");
  }
  const auto n_q = grid[0].get<std::size_t>();
  const auto n_delta = grid[1].get<std::size_t>();
  const std::size_t n_x = json_count(cfg, "n_x");
  if (band == 0) config_error("bands are numbered from 1");
  output_format(cfg, "json");
  return {cfg, [cfg, cell, band, n_q, n_delta, n_x, workers] {
            const ChernResult r = chern_number(cell, band, n_q, n_delta, n_x, workers);
            std::ostringstream os;
            if (cfg.at("format") == "json") {
              const json doc = {{"band", r.band},
                                {"chern", r.chern},
                                {"grid", {r.n_q, r.n_delta}},
                                {"min_overlap", r.min_overlap},
                                {"provenance", provenance(cfg)}};
              os << doc.dump(1) << '\n';
              return Outcome{os.str(), {}};
            }
            return Outcome{render_table(cfg, {"band", "chern", "n_q", "n_delta", "min_overlap"},
                                        {{r.band, r.chern, r.n_q, r.n_delta, r.min_overlap}}),
                           {}};
          }};
}

Plan plan_verify(const Flags& f, unsigned) {
  json cfg = base_config("verify", f);
  require_instance(cfg, f);
  const ScattererSet set = instance_from_json(cfg.at("instance"));
  if (f.m) cfg["m"] = *f.m;
  if (f.n) cfg["n"] = *f.n;
  if (f.tol) cfg["tol"] = *f.tol;
  if (!cfg.contains("m")) cfg["m"] = 2 * std::max<std::size_t>(set.size(), 1);
  if (!cfg.contains("n")) cfg["n"] = 20000;
  if (!cfg.contains("tol")) cfg["tol"] = 2e-3;
  const std::size_t m = json_count(cfg, "m");
  const std::size_t n = json_count(cfg, "n");
  const double tol = json_number(cfg, "tol");
  if (m == 0) config_error("m must be positive");
  output_format(cfg, "json");
  return {cfg, [cfg, set, m, n, tol] {
            const OracleComparison c = compare(set, m, n);
            std::vector<std::vector<json>> rows;
            for (std::size_t j = 0; j < m; ++j) {
              rows.push_back({c.bound + j + 1, c.bethe[j], c.fd[j],
                              std::abs(c.fd[j] - c.bethe[j]) / std::abs(c.bethe[j])});
            }
            std::string text;
            if (cfg.at("format") == "json") {
              const json doc = {{"provenance", provenance(cfg)},
                                {"max_relative_error", c.max_relative_error},
                                {"tolerance", tol},
                                {"passed", c.max_relative_error < tol},
                                {"bound", c.bound},
                                {"columns", {"index", "bethe", "fd", "relative_error"}},
                                {"rows", rows}};
              text = doc.dump(1) + "\n";
            } else {
              text = render_table(cfg, {"index", "bethe", "fd", "relative_error"}, rows);
            }
            if (!(c.max_relative_error < tol)) {
              return Outcome{text, "oracle disagrees: max relative error " +
                                       format_double(c.max_relative_error) + " >= " + format_double(tol)};
            }
            return Outcome{text, {}};
          }};
}

int exit_for(Errc code) {
  switch (code) {
    case Errc::ConfigError:
    case Errc::NonMonotonePositions:
    case Errc::PositionOutOfBox:
    case Errc::NonPositiveLength:
      return kExitConfig;
    case Errc::InvalidArgument:
    case Errc::OutOfDomain:
      return kExitRange;
    default:
      return kExitSolver;
  }
}

void add_output_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "Run configuration, instance file or earlier output");
  cmd.add_option("--out", f.out, "Output file (default: standard output)");
  cmd.add_option("--format", f.format, "csv or json");
  cmd.add_option("--threads", f.threads, "Worker threads (default: KP_THREADS or all cores)");
}

void add_instance_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--box", f.box, "Empty box: L=..");
  cmd.add_option("--uniform", f.uniform, "Equidistant lattice: L=..,M=..,h=..,delta=..");
  cmd.add_option("--alternating", f.alternating, "Two-height lattice: L=..,M=..,h1=..,h2=..,delta=..");
  cmd.add_option("--modulated", f.modulated, "Flux lattice: L=..,M=..,h_min=..,h_max=..,phi=..");
  cmd.add_option("--random", f.random, "Random heights: M=..[,L=..,h_min=..,h_max=..,delta=..]");
  cmd.add_option("--seed", f.seed, "Seed for --random");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite Kronig-Penney box with delta scatterers", "kp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));
  Flags f;

  auto* solve = app.add_subcommand("solve", "Quasimomenta and energies of one instance");
  add_instance_flags(*solve, f);
  solve->add_option("--kmax", f.k_max, "Largest quasimomentum");
  add_output_flags(*solve, f);

  auto* wave = app.add_subcommand("wavefunction", "Density of one eigenstate");
  add_instance_flags(*wave, f);
  wave->add_option("--kmax", f.k_max, "Largest quasimomentum");
  wave->add_option("--state", f.state, "State index as listed by solve");
  wave->add_option("--samples", f.samples, "Grid points, walls included (default 512)");
  add_output_flags(*wave, f);

  auto* sweep = app.add_subcommand("sweep", "Spectrum against the shift or the flux");
  sweep->add_option("--shift", f.shift, "Shift sweep: L,M,h|h1,h2|h_min,h_max,seed,delta_min,delta_max,points")
      ->expected(0, 1);
  sweep->add_option("--flux", f.flux, "Flux sweep: L,M,h_min,h_max,phi_min,phi_max,points")
      ->expected(0, 1);
  sweep->add_option("--kmax", f.k_max, "Largest quasimomentum");
  sweep->add_option("--points", f.points, "Number of parameter points");
  add_output_flags(*sweep, f);

  auto* chern = app.add_subcommand("chern", "Chern number of a band over the (q, delta) torus");
  chern->add_option("--cell", f.cell, "Unit cell: a=..,h=h1:h2:..[,y=y1:y2:..]");
  chern->add_option("--band", f.band, "Band index from 1 (default 1)");
  chern->add_option("--grid", f.grid, "Grid points per direction (default 32)");
  chern->add_option("--nx", f.n_x, "Samples per cell (default 256)");
  add_output_flags(*chern, f);

  auto* verify = app.add_subcommand("verify", "Compare with the finite-difference oracle");
  add_instance_flags(*verify, f);
  verify->add_option("--m", f.m, "Number of states (default 2M)");
  verify->add_option("--n", f.n, "Grid points (default 20000)");
  verify->add_option("--tol", f.tol, "Largest accepted relative error (default 2e-3)");
  add_output_flags(*verify, f);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const unsigned workers = f.threads > 0 ? f.threads : default_workers();
  const std::string name = app.get_subcommands().front()->get_name();
  Plan plan;
  try {
    if (name == "solve") plan = plan_solve(f, workers);
    if (name == "wavefunction") plan = plan_wavefunction(f, workers);
    if (name == "sweep") plan = plan_sweep(f, workers);
    if (name == "chern") plan = plan_chern(f, workers);
    if (name == "verify") plan = plan_verify(f, workers);
  } catch (const Exit& e) {
    err << "kp " << name << ": " << e.message << '\n';
    return e.code;
  } catch (const Error& e) {
    err << "kp " << name << ": " << e.what() << '\n';
    return kExitConfig;
  }

  Outcome result;
  try {
    result = plan.run();
  } catch (const Exit& e) {
    err << "kp " << name << ": " << e.message << '\n';
    return e.code;
  } catch (const Error& e) {
    err << "kp " << name << " " << plan.cfg.dump() << ": " << e.what() << '\n';
    return exit_for(e.code());
  }

  if (f.out.empty()) {
    out << result.text;
  } else {
    std::ofstream file(f.out, std::ios::binary);
    if (!file || !(file << result.text)) {
      err << "kp " << name << ": cannot write \"" << f.out << "\"\n";
      return kExitSolver;
    }
  }
  if (!result.failure.empty()) {
    err << "kp " << name << ": " << result.failure << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace kp

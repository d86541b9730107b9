#pragma once

// Parameter sweeps of the spectrum: the lattice shift Delta for
// the edge-state spectra and the modulation flux phi for the butterfly
// spectra. Every grid point is an independent solve.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "kp/eigensolve.hpp"

namespace kp {

struct HeightSpec {
  enum class Kind { Uniform, Alternating, Random, Explicit };
  Kind kind = Kind::Uniform;
  /// Uniform: first. Alternating: first, second. Random: first = h_min, second = h_max.
  double first = 0.0;
  double second = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  static HeightSpec uniform(double h);
  static HeightSpec alternating(double h1, double h2);
  static HeightSpec random(double h_min, double h_max, std::uint64_t seed);
  static HeightSpec explicit_values(std::vector<double> h);

  /// Heights for M scatterers; Explicit requires exactly M values.
  std::vector<double> heights(std::size_t count) const;
};

nlohmann::json to_json(const HeightSpec& spec);
/// {"uniform": h} | {"alternating": [h1, h2]} | {"random": {"h_min", "h_max", "seed"}} |
/// {"explicit": [...]}.
HeightSpec height_spec_from_json(const nlohmann::json& obj);

/// Either `points` equidistant values from start to stop (both included) or an
/// explicit list.
struct ParamGrid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 0;
  std::vector<double> list;

  static ParamGrid linspace(double start, double stop, std::size_t points);
  static ParamGrid of(std::vector<double> values);
  std::vector<double> values() const;
};

nlohmann::json to_json(const ParamGrid& grid);
ParamGrid param_grid_from_json(const nlohmann::json& obj);

struct ShiftSweep {
  double length = 11.0;
  std::size_t count = 11;
  HeightSpec heights = HeightSpec::uniform(0.4);
  ParamGrid deltas = ParamGrid::linspace(-1.0, 1.0, 201);
  double k_max = 7.0;
  /// 0 selects one lattice period, 1/M.
  double edge_fraction = 0.0;
};

struct FluxSweep {
  /// 0 selects M + 1 (unit spacing between scatterers).
  double length = 0.0;
  std::size_t count = 17;
  double h_min = 0.1;
  double h_max = 1.5;
  /// phi in [0, (M + 1) / 2].
  ParamGrid phis = ParamGrid::linspace(0.0, 9.0, 300);
  double k_max = 10.0;
  double edge_fraction = 0.0;
};

nlohmann::json to_json(const ShiftSweep& sweep);
nlohmann::json to_json(const FluxSweep& sweep);
ShiftSweep shift_sweep_from_json(const nlohmann::json& obj);
FluxSweep flux_sweep_from_json(const nlohmann::json& obj);

double flux_length(const FluxSweep& sweep) noexcept;
double sweep_edge_fraction(double requested, std::size_t count) noexcept;

struct SweepRow {
  double param_value = 0.0;
  /// 1-based position in the full spectrum, so bound states (E < 0), which
  /// the k > 0 solver does not report, show up as skipped indices.
  std::size_t state_index = 0;
  double k = 0.0;
  double energy = 0.0;
  double edge_weight = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepTable {
  std::string param;
  std::vector<SweepRow> rows;
  /// Everything needed to regenerate the table.
  nlohmann::json provenance;

  /// Rows of one parameter value, in k order.
  std::vector<SweepRow> at(double value) const;
};

/// Throws the solver's error code with the offending Delta attached; a Delta
/// outside [-1, 1] is InvalidArgument.
SweepTable sweep_shift(const ShiftSweep& sweep, const SolverOptions& options = {});
SweepTable sweep_flux(const FluxSweep& sweep, const SolverOptions& options = {});

/// CSV: "# provenance: {json}" comment line, then
/// "param,param_value,state_index,k,energy,edge_weight" and one line per row.
void write_csv(const SweepTable& table, std::ostream& out);
/// {"provenance": {...}, "param": .., "columns": [...], "rows": [[...], ...]}.
void write_json(const SweepTable& table, std::ostream& out);
/// Reads either format back.
SweepTable read_table(std::istream& in);

}  // namespace kp

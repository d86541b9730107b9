#pragma once

// Problem instances for the finite Kronig-Penney box: a hard-wall box of
// length L on [-L/2, L/2] holding M delta scatterers h_n * delta(x - y_n).
// Natural units (m = hbar = 1) throughout, so the derivative jump at a
// scatterer is 2 h_n psi(y_n) and E = k^2 / 2.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

namespace kp {

/// One free stretch between two consecutive scatterers (or a wall).
/// Index 0 is the leftmost region, index M the rightmost.
struct Region {
  std::size_t index;
  double left;
  double right;
};

class ScattererSet {
 public:
  /// Validates and builds an instance. Positions must already be strictly
  /// increasing and inside the closed box; they are never reordered.
  ScattererSet(double length, std::vector<double> positions, std::vector<double> heights);

  double length() const noexcept { return length_; }
  double left_wall() const noexcept { return -0.5 * length_; }
  double right_wall() const noexcept { return 0.5 * length_; }
  std::size_t size() const noexcept { return positions_.size(); }
  bool empty() const noexcept { return positions_.empty(); }

  std::span<const double> positions() const noexcept { return positions_; }
  std::span<const double> heights() const noexcept { return heights_; }

  std::size_t region_count() const noexcept { return positions_.size() + 1; }
  Region region(std::size_t index) const;

  /// Region containing x; a point sitting on a scatterer belongs to the
  /// region on its left.
  std::size_t region_of(double x) const;

  friend bool operator==(const ScattererSet&, const ScattererSet&) = default;

 private:
  double length_;
  std::vector<double> positions_;
  std::vector<double> heights_;
};

ScattererSet make_scatterer_set(double length, std::vector<double> positions,
                                std::vector<double> heights);

/// Equidistant lattice y_n = -L/2 + (n + (shift - 1)/2) L/M, n = 1..M, with
/// shift in [-1, 1]. At shift = +-1 one scatterer sits on a wall.
ScattererSet uniform_lattice(double length, std::size_t count, double height, double shift);
ScattererSet uniform_lattice(double length, std::vector<double> heights, double shift);
std::vector<double> uniform_positions(double length, std::size_t count, double shift);

/// Flux-modulated heights h_n = h_min + (h_max - h_min) cos^2(2 pi phi (a n + 1/2)),
/// a = 1/(M+1), on the equidistant positions y_n = -L/2 + a n L.
std::vector<double> modulated_heights(std::size_t count, double h_min, double h_max, double flux);
ScattererSet modulated_lattice(double length, std::size_t count, double h_min, double h_max,
                               double flux);
/// Period of the modulation in flux, (M+1)/2.
double flux_period(std::size_t count);

/// Alternating heights first, second, first, ... starting at n = 1.
std::vector<double> alternating_heights(std::size_t count, double first, double second);

/// Uniform heights in [h_min, h_max]. The stream is std::mt19937_64 seeded
/// with `seed`; each draw d gives u = (d >> 11) * 2^-53 in [0, 1) and the
/// height h_min + (h_max - h_min) u. Bit-exact across platforms.
std::vector<double> random_heights(std::size_t count, double h_min, double h_max,
                                   std::uint64_t seed);

/// Instance schema:
///   {"L": x, "scatterers": [{"y": .., "h": ..}, ...]}
///   {"box": {"L"}}
///   {"uniform": {"L", "M", "h", "delta"}}
///   {"alternating": {"L", "M", "h1", "h2", "delta"}}
///   {"modulated": {"L", "M", "h_min", "h_max", "phi"}}
///   {"random": {"L", "M", "h_min", "h_max", "seed", "delta"}}
/// Missing generator keys raise ConfigError.
ScattererSet instance_from_json(const nlohmann::json& spec);
nlohmann::json to_json(const ScattererSet& set);

}  // namespace kp

#pragma once

// Periodic counterpart of the lattice: a unit cell [0, a) repeated along the
// whole line, its Bloch bands, and the Chern number of a band over the torus
// of Bloch momentum q and lattice shift delta.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "kp/bethe.hpp"

namespace kp {

class UnitCell {
 public:
  /// Positions are given for delta = 0 and must lie in [0, a) and be
  /// distinct; any order. The shift is reduced to [0, 1).
  UnitCell(double a, std::vector<double> positions, std::vector<double> heights,
           double shift = 0.0);

  double period() const noexcept { return a_; }
  double shift() const noexcept { return shift_; }
  std::size_t size() const noexcept { return base_.size(); }

  /// Same cell with the scatterers translated by shift * a (mod a).
  UnitCell shifted(double shift) const;

  /// Scatterers at their shifted places, sorted.
  std::span<const double> positions() const noexcept { return placed_; }
  std::span<const double> heights() const noexcept { return placed_heights_; }

  /// Transfer matrix across one period starting just left of x = 0.
  Mat2 monodromy(double k) const noexcept;
  /// Half the monodromy trace; the band condition is discriminant(k) = cos(q a).
  double discriminant(double k) const noexcept;
  /// Unfolded Bloch phase: (j - 1) pi + |q a| on odd bands, j pi - |q a| on even
  /// bands, j pi inside gap j. Non-decreasing in k.
  double rotation_number(double k) const noexcept;

 private:
  double a_;
  double shift_;
  std::vector<double> base_;
  std::vector<double> base_heights_;
  std::vector<double> placed_;
  std::vector<double> placed_heights_;
};

/// One scatterer of height h per cell of length a, placed at 0 for delta = 0.
UnitCell simple_cell(double a, double height, double shift = 0.0);

/// Quasimomentum of band `band` (1-based) at Bloch momentum q. At band edges the
/// value belonging to this band is returned. Throws BandNotFound when the
/// search window cannot be closed.
double band_quasimomentum(const UnitCell& cell, double q, std::size_t band);

/// The n_bands lowest quasimomenta at Bloch momentum q, one per band.
std::vector<double> bloch_bands(const UnitCell& cell, double q, std::size_t n_bands);

struct BlochState {
  double q = 0.0;
  double shift = 0.0;
  std::size_t band = 0;
  double k = 0.0;
  double period = 0.0;
  /// u(x_i) = exp(-i q x_i) psi(x_i) at x_i = i a / N_x, sum |u_i|^2 a / N_x = 1,
  /// first sample of magnitude >= 1e-8 real and positive.
  std::vector<std::complex<double>> u;

  double x(std::size_t i) const noexcept {
    return period * static_cast<double>(i) / static_cast<double>(u.size());
  }
};

BlochState bloch_state(const UnitCell& cell, double q, double shift, std::size_t band,
                       std::size_t n_x = 256);

/// Rectangle-rule <lhs|rhs> over one cell (exact for periodic trapezoid).
std::complex<double> cell_overlap(std::span<const std::complex<double>> lhs,
                                  std::span<const std::complex<double>> rhs, double period);

struct BerryGrid {
  std::size_t n_q = 0;
  std::size_t n_delta = 0;
  std::size_t band = 0;
  /// states[i * n_delta + j] at q_i = -pi/a + 2 pi i / (a n_q), delta_j = j / n_delta.
  std::vector<BlochState> states;
  /// Plaquette angles in (-pi, pi], same layout as states.
  std::vector<double> plaquettes;
  /// Sum of the plaquette angles divided by 2 pi.
  double raw_sum = 0.0;
  double min_overlap = 0.0;
  int chern = 0;
};

/// Fills the states of a grid (parallel over q rows).
BerryGrid berry_grid(const UnitCell& cell, std::size_t band, std::size_t n_q,
                     std::size_t n_delta, std::size_t n_x = 256, unsigned workers = 0);

/// Link-variable evaluation on already filled states. Throws GapClosure if any
/// link has |<u|u'>| < 0.1.
void evaluate_chern(BerryGrid& grid);

struct ChernResult {
  std::size_t band = 0;
  int chern = 0;
  std::size_t n_q = 0;
  std::size_t n_delta = 0;
  /// Sum of the plaquette angles divided by 2 pi.
  double raw_sum = 0.0;
  double min_overlap = 0.0;
};

ChernResult chern_number(const UnitCell& cell, std::size_t band, std::size_t n_q = 32,
                         std::size_t n_delta = 32, std::size_t n_x = 256,
                         unsigned workers = 0);

struct BulkGap {
  /// Top of band j and bottom of band j + 1 as energies; lo == hi when closed.
  double lo = 0.0;
  double hi = 0.0;
  bool open() const noexcept { return hi > lo; }
  bool contains(double energy) const noexcept { return energy > lo && energy < hi; }
};

/// n_bands - 1 gaps between consecutive bands. Band extremes sit at q = 0 and
/// q = pi / a; gaps narrower than 1e-7 relative are reported closed.
std::vector<BulkGap> bulk_gaps(const UnitCell& cell, std::size_t n_bands);

}  // namespace kp

#pragma once

// Finite-difference cross-check of the exact solver. Test and verification
// use only; nothing here feeds production output.

#include <cstddef>
#include <vector>

#include "kp/model.hpp"
#include "kp/topology.hpp"

namespace kp {

struct FdSpectrum {
  std::size_t n = 0;
  /// L / (N + 1).
  double dx = 0.0;
  std::vector<double> energies;
  /// Largest distance between a scatterer and the grid point it was moved to.
  double max_snap_error = 0.0;
  /// Scatterers that snapped onto a wall and were dropped (psi = 0 there).
  std::size_t dropped = 0;
};

/// Lowest m eigenvalues of the three-point Dirichlet Laplacian on N interior
/// points, each delta as an on-site h / dx at its nearest point. Throws
/// GridTooCoarse if two scatterers share a point.
FdSpectrum fd_spectrum(const ScattererSet& set, std::size_t n, std::size_t m);

/// Eigenvector of the same matrix closest to `energy`, by inverse iteration.
/// Samples at x_i = -L/2 + i dx, i = 1..N, scaled so sum psi_i^2 dx = 1 and
/// the largest sample is positive.
std::vector<double> fd_eigenvector(const ScattererSet& set, std::size_t n, double energy);

struct OracleComparison {
  double max_relative_error = 0.0;
  std::vector<double> bethe;
  std::vector<double> fd;
  /// Oracle states below the midpoint of the m-th and (m+1)-th exact energies,
  /// bound states included.
  std::size_t fd_count = 0;
  /// States with E < 0; the oracle lists them first and they are skipped.
  std::size_t bound = 0;
};

/// Lowest m exact energies with E > 0 against the oracle. Throws CountMismatch
/// when the oracle counts a different number of states below the m-th energy
/// than the bound states plus m.
OracleComparison compare(const ScattererSet& set, std::size_t m, std::size_t n);

/// Lowest m energies of one cell on a ring of N points with the Bloch twist
/// exp(i q a) across the seam.
std::vector<double> fd_ring_spectrum(const UnitCell& cell, double q, std::size_t n, std::size_t m);

}  // namespace kp

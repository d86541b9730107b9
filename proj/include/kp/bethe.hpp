#pragma once

// Quasimomentum condition for the finite Kronig-Penney box.
//
// Two routes are kept side by side:
//  * the real transfer route, propagating (psi, psi') across free stretches
//    and delta jumps psi' -> psi' + 2 h psi; it has no poles and drives the
//    root finder;
//  * the plane-wave route, built from the reflection ratios
//    R_n = A_n(-k) / A_n(k) and the scattering ratios S_n = A_{n+1}(k) / A_n(k),
//    together with the explicit subset-sum form of the condition.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "kp/model.hpp"

namespace kp {

using Complex = std::complex<double>;

struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  double det() const noexcept { return a11 * a22 - a12 * a21; }
  double trace() const noexcept { return a11 + a22; }
};

Mat2 operator*(const Mat2& lhs, const Mat2& rhs) noexcept;

/// Wavefunction value and slope at one point.
struct TransferState {
  double psi = 0.0;
  double dpsi = 0.0;
};

TransferState operator*(const Mat2& m, const TransferState& s) noexcept;

/// A stretch [start, end] holding delta scatterers at sorted positions.
/// Scatterers lying on `start` or `end` are applied there.
struct Line {
  double start = 0.0;
  double end = 0.0;
  std::span<const double> positions;
  std::span<const double> heights;
};

Line line_of(const ScattererSet& set) noexcept;

Mat2 free_propagation(double k, double distance) noexcept;
Mat2 delta_jump(double height) noexcept;

Mat2 transfer_matrix(const Line& line, double k) noexcept;
Mat2 transfer_matrix(const ScattererSet& set, double k) noexcept;

/// Modified Pruefer angle theta(end) with psi = r sin(theta), psi'/k = r cos(theta),
/// started from `initial` at line.start. Continuous across the whole line: a free
/// stretch of length d adds k d, a delta keeps theta inside the same [m pi, (m+1) pi).
double pruefer_angle(const Line& line, double k, double initial = 0.0) noexcept;

/// Zeros of psi strictly inside (start, end) for a sweep that began at a node.
long interior_zeros(double theta_end) noexcept;

/// Right-wall residual of the solution started as psi = 0 at the left wall,
/// scaled to the unit circle: sin(theta(L/2)). Its zeros are exactly the
/// allowed quasimomenta; the value always lies in [-1, 1].
double bethe_mismatch(const ScattererSet& set, double k) noexcept;

/// psi(L/2) for the unscaled start (psi, psi') = (0, 1).
double raw_right_wall_value(const ScattererSet& set, double k) noexcept;

/// sum_n 2^n xi_n k^(M-n), xi_n summing over ordered index subsets
/// p_1 < ... < p_n of prod h_p times prod sin(k (y_{p_j} - y_{p_{j-1}})), with the
/// walls as y_{p_0} and y_{p_{n+1}}. Equal to k^(M+1) raw_right_wall_value.
/// Throws SubsetBlowup beyond `max_scatterers`.
double bethe_polynomial_form(const ScattererSet& set, double k, std::size_t max_scatterers = 12);

struct ReflectionVector {
  /// R_1 .. R_{M+1}. R_1 = -exp(-ikL) from the left wall, inner entries carried
  /// from the left, and R_{M+1} = -exp(ikL) set by the right wall (for M = 0 the
  /// single entry is the left-wall value).
  std::vector<Complex> values;
  /// R_{M+1} obtained by carrying the left recursion through every scatterer.
  Complex carried;
  /// -exp(ikL).
  Complex right_wall;

  /// Zero exactly at allowed quasimomenta.
  Complex bethe_residual() const noexcept { return carried - right_wall; }
};

/// One step of the left recursion across a scatterer at y with height h.
/// Throws RecursionPole when |denominator| < pole_floor * |numerator|.
Complex reflection_step(Complex previous, double y, double h, double k, double pole_floor = 1e-12);

ReflectionVector reflection_coefficients(const ScattererSet& set, double k,
                                         double pole_floor = 1e-12);

/// S_n = 1 - (i/k) h_n (1 + exp(-2 i y_n k) R_n), n = 1..M.
std::vector<Complex> scattering_coefficients(const ScattererSet& set, double k,
                                             const ReflectionVector& reflection);

}  // namespace kp

#pragma once

// Eigenfunctions assembled from plane waves, region by region:
//   Psi(x) = A_n(k) exp(ikx) + A_n(-k) exp(-ikx),  x in region n.
// Coefficients are stored normalized in the gauge where A_1(k) = N exp(ikL/2)
// with N > 0; there A_n(-k) = -conj(A_n(k)) and Psi is i times a real function.

#include <complex>
#include <cstddef>
#include <vector>

#include "kp/bethe.hpp"
#include "kp/eigensolve.hpp"
#include "kp/model.hpp"

namespace kp {

struct StateOptions {
  /// Largest |Psi(L/2)| / peak amplitude accepted from a root.
  double boundary_tolerance = 1e-9;
  /// Largest root residual accepted, unless the mismatch changes sign across
  /// the neighbouring doubles of k.
  double residual_tolerance = 1e-8;
};

struct EigenState {
  ScattererSet set;
  QuasimomentumRoot root;
  std::vector<Complex> forward;   // A_n(k), n = 1..M+1
  std::vector<Complex> backward;  // A_n(-k)
  /// Normalization constant relative to the A_1(k) = 1 chain.
  double norm = 1.0;

  double k() const noexcept { return root.k; }
};

/// Coefficient chain A_{n+1}(k) = S_n A_n(k) from A_1(k) = 1, A_n(-k) = R_n A_n(k).
/// Throws InvalidRoot when the right-wall residual exceeds the tolerance.
EigenState build_state(const ScattererSet& set, const QuasimomentumRoot& root,
                       const StateOptions& options = {});

/// A_n(k) for n = 1..M+1 from the explicit subset sums
///   A_n(k) = exp(ikL/2) (1 + sum_j (2/k)^j Xi_j^n),
///   Xi_j^n = sum over p_1 < ... < p_j <= n-1 of
///            exp(-ik(y_{p_j} + L/2)) prod_l h_{p_l} sin(k (y_{p_l} - y_{p_{l-1}})),
/// unnormalized, in the same gauge as the chain times exp(ikL/2).
/// Throws SubsetBlowup when M exceeds the cap.
std::vector<Complex> explicit_coefficients(const ScattererSet& set, double k,
                                           std::size_t max_scatterers = 12);

/// (sum_n integral of |Psi|^2 over region n)^(-1/2) in closed form, for
/// coefficients obeying A_n(-k) = -conj(A_n(k)).
double normalization_constant(const ScattererSet& set, double k,
                              const std::vector<Complex>& forward);

Complex evaluate(const EigenState& state, double x);
/// Value and slope using region `region`'s plane waves (for one-sided limits).
Complex evaluate_in_region(const EigenState& state, std::size_t region, double x);
Complex derivative_in_region(const EigenState& state, std::size_t region, double x);

/// Integral of |Psi|^2 over [x0, x1], exact per region.
double interval_probability(const EigenState& state, double x0, double x1);

/// Probability within edge_fraction * L of either wall.
double edge_weight(const EigenState& state, double edge_fraction);

/// <a|b> over the box, exact per region. Both states must share the instance.
Complex overlap(const EigenState& a, const EigenState& b);

struct DensitySample {
  double x;
  Complex psi;
  double density;
};

/// n_samples uniform points from wall to wall inclusive.
std::vector<DensitySample> density_grid(const EigenState& state, std::size_t n_samples);

}  // namespace kp

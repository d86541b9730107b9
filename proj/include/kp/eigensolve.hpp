#pragma once

#include <cstddef>
#include <vector>

#include "kp/model.hpp"

namespace kp {

struct SolverOptions {
  /// Scan starts here; k = 0 is outside the domain.
  double k_min = 1e-6;
  /// Scan step is pi / (L * q_factor * (M + 1)).
  double q_factor = 8.0;
  double tol_rel = 1e-12;
  /// Roots closer than this are merged and flagged.
  double tol_sep = 1e-9;
  /// A local minimum of |mismatch| below this counts as a tangential zero.
  double tangent_floor = 1e-10;
  int max_iter = 200;
  /// 0 selects default_workers().
  unsigned workers = 0;
};

struct QuasimomentumRoot {
  double k = 0.0;
  double energy = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  double residual = 0.0;
  bool multiplicity_flag = false;

  friend bool operator==(const QuasimomentumRoot&, const QuasimomentumRoot&) = default;
};

QuasimomentumRoot make_root(double k, double k_lo, double k_hi, double residual,
                            bool flagged = false) noexcept;

/// All allowed quasimomenta in (k_min, k_max), ascending.
/// Throws BracketExhaustion (naming the interval) if a bracket fails to refine.
std::vector<QuasimomentumRoot> find_roots(const ScattererSet& set, double k_max,
                                          const SolverOptions& options = {});

/// The `count` lowest roots, growing k_max until enough are found.
std::vector<QuasimomentumRoot> find_lowest_roots(const ScattererSet& set, std::size_t count,
                                                 const SolverOptions& options = {});

/// Number of eigenvalues strictly below `energy`, from the node count of the
/// solution started at the left wall (oscillation theorem). Independent of
/// find_roots.
std::size_t count_states_below(const ScattererSet& set, double energy);

/// Eigenvalues below E = k_min^2 / 2; nonzero means negative-energy states
/// that find_roots does not report.
std::size_t bound_state_count(const ScattererSet& set, const SolverOptions& options = {});

}  // namespace kp

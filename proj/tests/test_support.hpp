#pragma once

// Shared helpers for the unit suites: random instances and an independent
// plane-wave fit built only from the real transfer matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "kp/bethe.hpp"
#include "kp/model.hpp"

namespace kp::testing {

/// Random positions (sorted, separated by at least min_gap) and heights.
inline ScattererSet random_instance(std::mt19937_64& rng, std::size_t m, double length,
                                    double h_lo, double h_hi, double min_gap = 0.05) {
  std::uniform_real_distribution<double> pos(-0.5 * length, 0.5 * length);
  std::uniform_real_distribution<double> height(h_lo, h_hi);
  std::vector<double> y;
  while (y.size() < m) {
    const double candidate = pos(rng);
    const bool clear = std::all_of(y.begin(), y.end(), [&](double v) {
      return std::abs(v - candidate) > min_gap;
    });
    if (clear && std::abs(std::abs(candidate) - 0.5 * length) > min_gap) y.push_back(candidate);
  }
  std::sort(y.begin(), y.end());
  std::vector<double> h(m);
  for (auto& v : h) v = height(rng);
  return ScattererSet(length, y, h);
}

/// (psi, psi') at x for the solution started as (0, 1) at the left wall.
inline TransferState propagate_to(const ScattererSet& set, double k, double x) {
  std::vector<double> y, h;
  for (std::size_t n = 0; n < set.size(); ++n) {
    if (set.positions()[n] < x) {
      y.push_back(set.positions()[n]);
      h.push_back(set.heights()[n]);
    }
  }
  const Line line{set.left_wall(), x, y, h};
  return transfer_matrix(line, k) * TransferState{0.0, 1.0};
}

/// Plane-wave amplitudes (A(k), A(-k)) of region n, read off from (psi, psi')
/// at the region's midpoint.
inline std::pair<std::complex<double>, std::complex<double>> fitted_amplitudes(
    const ScattererSet& set, double k, std::size_t region) {
  const auto r = set.region(region);
  const double x = 0.5 * (r.left + r.right);
  const auto s = propagate_to(set, k, x);
  const std::complex<double> i(0.0, 1.0);
  const auto plus = 0.5 * (s.psi - i * s.dpsi / k) * std::polar(1.0, -k * x);
  const auto minus = 0.5 * (s.psi + i * s.dpsi / k) * std::polar(1.0, k * x);
  return {plus, minus};
}

/// Even-state root of the centred single barrier: sin k + (k / h) cos k = 0 on
/// (pi/2, pi) for a box of length 2, by plain bisection.
inline double centred_barrier_even_root(double h, double lo, double hi) {
  auto g = [h](double k) { return h * std::sin(k) + k * std::cos(k); };
  double g_lo = g(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace kp::testing

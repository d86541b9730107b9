#include "kp/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kp/errors.hpp"

namespace kp {

namespace {

// integral of cos(w x) over [x0, x1], stable for small w
double cos_integral(double w, double x0, double x1) {
  const double half = 0.5 * (x1 - x0);
  const double centre = 0.5 * (x1 + x0);
  const double arg = w * half;
  const double sinc = std::abs(arg) < 1e-8 ? 1.0 - arg * arg / 6.0 : std::sin(arg) / arg;
  return 2.0 * half * std::cos(w * centre) * sinc;
}

// integral of sin(w x) over [x0, x1]
double sin_integral(double w, double x0, double x1) {
  const double half = 0.5 * (x1 - x0);
  const double centre = 0.5 * (x1 + x0);
  const double arg = w * half;
  const double sinc = std::abs(arg) < 1e-8 ? 1.0 - arg * arg / 6.0 : std::sin(arg) / arg;
  return 2.0 * half * std::sin(w * centre) * sinc;
}

// integral over [x0, x1] of (a1 sin k1x + b1 cos k1x)(a2 sin k2x + b2 cos k2x)
double product_integral(double a1, double b1, double k1, double a2, double b2, double k2,
                        double x0, double x1) {
  const double d = k1 - k2;
  const double s = k1 + k2;
  const double cd = cos_integral(d, x0, x1), cs = cos_integral(s, x0, x1);
  const double sd = sin_integral(d, x0, x1), ss = sin_integral(s, x0, x1);
  return 0.5 * (a1 * a2 * (cd - cs) + b1 * b2 * (cd + cs) + a1 * b2 * (ss + sd) +
                b1 * a2 * (ss - sd));
}

// Psi = 2i (a sin kx + b cos kx) in region n, a + ib = A_n(k).
double region_product(const EigenState& lhs, const EigenState& rhs, std::size_t n, double x0,
                      double x1) {
  const Complex& p = lhs.forward[n];
  const Complex& q = rhs.forward[n];
  return 4.0 * product_integral(p.real(), p.imag(), lhs.k(), q.real(), q.imag(), rhs.k(), x0, x1);
}

std::string describe(double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

}  // namespace

double normalization_constant(const ScattererSet& set, double k,
                              const std::vector<Complex>& forward) {
  double total = 0.0;
  for (std::size_t n = 0; n < set.region_count(); ++n) {
    const auto r = set.region(n);
    const double a = forward[n].real();
    const double b = forward[n].imag();
    total += 2.0 * std::norm(forward[n]) * (r.right - r.left) -
             (std::sin(2.0 * k * r.right) - std::sin(2.0 * k * r.left)) / k * (a * a - b * b) -
             (std::cos(2.0 * k * r.right) - std::cos(2.0 * k * r.left)) / k * 2.0 * a * b;
  }
  return 1.0 / std::sqrt(total);
}

EigenState build_state(const ScattererSet& set, const QuasimomentumRoot& root,
                       const StateOptions& options) {
  const double k = root.k;
  // a state that decays strongly towards the right wall can leave a mismatch
  // above the tolerance even at machine resolution; a sign change across the
  // neighbouring doubles still marks a genuine zero there, provided the root
  // reports its actual residual
  const auto resolved = [&] {
    if (root.residual <= options.residual_tolerance) return true;
    if (std::abs(std::abs(bethe_mismatch(set, k)) - root.residual) > 1e-12 * root.residual) return false;
    const double below = bethe_mismatch(set, std::nextafter(k, 0.0));
    const double above = bethe_mismatch(set, std::nextafter(k, 2.0 * k));
    return (below < 0.0) != (above < 0.0);
  };
  if (!(k > 0.0) || !resolved()) {
    throw Error(Errc::InvalidRoot, "root at k = " + describe(k) + " has residual " +
                                       describe(root.residual));
  }
  const auto reflection = reflection_coefficients(set, k);
  const auto scattering = scattering_coefficients(set, k, reflection);

  const std::size_t regions = set.region_count();
  std::vector<Complex> forward(regions);
  std::vector<Complex> ratio(regions);
  forward[0] = 1.0;
  for (std::size_t n = 0; n + 1 < regions; ++n) {
    forward[n + 1] = scattering[n] * forward[n];
  }
  for (std::size_t n = 0; n < regions; ++n) {
    ratio[n] = n + 1 < regions ? reflection.values[n] : reflection.carried;
  }

  // move to the gauge with A_n(-k) = -conj(A_n(k))
  const Complex gauge = std::polar(1.0, 0.5 * k * set.length());
  for (auto& a : forward) a *= gauge;
  const double norm = normalization_constant(set, k, forward);

  EigenState state{set, root, {}, {}, norm};
  state.forward.resize(regions);
  state.backward.resize(regions);
  double peak = 0.0;
  for (std::size_t n = 0; n < regions; ++n) {
    state.forward[n] = norm * forward[n];
    state.backward[n] = ratio[n] * state.forward[n];
    peak = std::max(peak, 2.0 * std::abs(state.forward[n]));
  }

  const double wall = set.right_wall();
  const Complex residual = state.forward.back() * std::polar(1.0, k * wall) +
                           state.backward.back() * std::polar(1.0, -k * wall);
  if (std::abs(residual) > options.boundary_tolerance * peak) {
    throw Error(Errc::InvalidRoot, "right-wall residual " + describe(std::abs(residual) / peak) +
                                       " at k = " + describe(k));
  }
  return state;
}

std::vector<Complex> explicit_coefficients(const ScattererSet& set, double k,
                                           std::size_t max_scatterers) {
  const std::size_t m = set.size();
  if (m > max_scatterers) {
    throw Error(Errc::SubsetBlowup, "explicit coefficients over " + std::to_string(m) +
                                        " scatterers exceed cap " +
                                        std::to_string(max_scatterers));
  }
  const auto y = set.positions();
  const auto h = set.heights();
  const double half = 0.5 * set.length();
  std::vector<Complex> out(set.region_count());
  for (std::size_t n = 0; n < out.size(); ++n) {
    // subsets of the n scatterers left of region n
    Complex sum = 1.0;
    const std::size_t subsets = std::size_t{1} << n;
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      double product = 1.0;
      double previous = -half;
      std::size_t last = 0;
      int chosen = 0;
      for (std::size_t p = 0; p < n; ++p) {
        if ((mask >> p) & 1U) {
          product *= h[p] * std::sin(k * (y[p] - previous));
          previous = y[p];
          last = p;
          ++chosen;
        }
      }
      sum += std::pow(2.0 / k, chosen) * product * std::polar(1.0, -k * (y[last] + half));
    }
    out[n] = std::polar(1.0, k * half) * sum;
  }
  return out;
}

Complex evaluate_in_region(const EigenState& state, std::size_t region, double x) {
  const double k = state.k();
  return state.forward[region] * std::polar(1.0, k * x) +
         state.backward[region] * std::polar(1.0, -k * x);
}

Complex derivative_in_region(const EigenState& state, std::size_t region, double x) {
  const double k = state.k();
  return Complex(0.0, k) * (state.forward[region] * std::polar(1.0, k * x) -
                            state.backward[region] * std::polar(1.0, -k * x));
}

Complex evaluate(const EigenState& state, double x) {
  const auto& set = state.set;
  if (!(x >= set.left_wall() && x <= set.right_wall())) {
    throw Error(Errc::OutOfDomain, "x = " + describe(x) + " outside the box");
  }
  // hard walls
  if (x == set.left_wall() || x == set.right_wall()) return 0.0;
  return evaluate_in_region(state, set.region_of(x), x);
}

double interval_probability(const EigenState& state, double x0, double x1) {
  const auto& set = state.set;
  x0 = std::max(x0, set.left_wall());
  x1 = std::min(x1, set.right_wall());
  double total = 0.0;
  for (std::size_t n = 0; n < set.region_count(); ++n) {
    const auto r = set.region(n);
    const double lo = std::max(r.left, x0);
    const double hi = std::min(r.right, x1);
    if (hi > lo) total += region_product(state, state, n, lo, hi);
  }
  return total;
}

double edge_weight(const EigenState& state, double edge_fraction) {
  if (!(edge_fraction > 0.0 && edge_fraction <= 0.5)) {
    throw Error(Errc::InvalidArgument, "edge fraction must lie in (0, 0.5]");
  }
  const auto& set = state.set;
  const double width = edge_fraction * set.length();
  if (edge_fraction == 0.5) return interval_probability(state, set.left_wall(), set.right_wall());
  return interval_probability(state, set.left_wall(), set.left_wall() + width) +
         interval_probability(state, set.right_wall() - width, set.right_wall());
}

Complex overlap(const EigenState& a, const EigenState& b) {
  if (!(a.set == b.set)) {
    throw Error(Errc::InvalidArgument, "overlap needs states of the same instance");
  }
  double total = 0.0;
  for (std::size_t n = 0; n < a.set.region_count(); ++n) {
    const auto r = a.set.region(n);
    if (r.right > r.left) total += region_product(a, b, n, r.left, r.right);
  }
  // conj(2i f) * 2i g = 4 f g is real
  return total;
}

std::vector<DensitySample> density_grid(const EigenState& state, std::size_t n_samples) {
  if (n_samples < 2) throw Error(Errc::InvalidArgument, "density grid needs at least 2 samples");
  const auto& set = state.set;
  std::vector<DensitySample> out(n_samples);
  const double step = set.length() / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double x = i + 1 == n_samples ? set.right_wall()
                                        : set.left_wall() + static_cast<double>(i) * step;
    const Complex psi = evaluate(state, x);
    out[i] = {x, psi, std::norm(psi)};
  }
  return out;
}

}  // namespace kp

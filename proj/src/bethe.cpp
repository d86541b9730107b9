#include "kp/bethe.hpp"

#include <cmath>
#include <numbers>

#include "kp/errors.hpp"

namespace kp {

Mat2 operator*(const Mat2& l, const Mat2& r) noexcept {
  return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
          l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
}

TransferState operator*(const Mat2& m, const TransferState& s) noexcept {
  return {m.a11 * s.psi + m.a12 * s.dpsi, m.a21 * s.psi + m.a22 * s.dpsi};
}

Line line_of(const ScattererSet& set) noexcept {
  return {set.left_wall(), set.right_wall(), set.positions(), set.heights()};
}

Mat2 free_propagation(double k, double distance) noexcept {
  const double c = std::cos(k * distance);
  const double s = std::sin(k * distance);
  return {c, s / k, -k * s, c};
}

Mat2 delta_jump(double height) noexcept { return {1.0, 0.0, 2.0 * height, 1.0}; }

Mat2 transfer_matrix(const Line& line, double k) noexcept {
  Mat2 total;
  double x = line.start;
  for (std::size_t n = 0; n < line.positions.size(); ++n) {
    total = delta_jump(line.heights[n]) * (free_propagation(k, line.positions[n] - x) * total);
    x = line.positions[n];
  }
  return free_propagation(k, line.end - x) * total;
}

Mat2 transfer_matrix(const ScattererSet& set, double k) noexcept {
  return transfer_matrix(line_of(set), k);
}

namespace {

double jump_angle(double theta, double height, double k) noexcept {
  const double m = std::floor(theta / std::numbers::pi);
  const double frac = theta - m * std::numbers::pi;
  const double s = std::sin(frac);
  const double c = std::cos(frac);
  // sin(frac) >= 0, so atan2 stays in [0, pi] and psi keeps its sign
  return m * std::numbers::pi + std::atan2(s, c + 2.0 * height / k * s);
}

}  // namespace

double pruefer_angle(const Line& line, double k, double initial) noexcept {
  double theta = initial;
  double x = line.start;
  for (std::size_t n = 0; n < line.positions.size(); ++n) {
    theta += k * (line.positions[n] - x);
    theta = jump_angle(theta, line.heights[n], k);
    x = line.positions[n];
  }
  return theta + k * (line.end - x);
}

long interior_zeros(double theta_end) noexcept {
  if (theta_end <= 0.0) return 0;
  return static_cast<long>(std::ceil(theta_end / std::numbers::pi)) - 1;
}

double bethe_mismatch(const ScattererSet& set, double k) noexcept {
  return std::sin(pruefer_angle(line_of(set), k));
}

double raw_right_wall_value(const ScattererSet& set, double k) noexcept {
  return (transfer_matrix(set, k) * TransferState{0.0, 1.0}).psi;
}

double bethe_polynomial_form(const ScattererSet& set, double k, std::size_t max_scatterers) {
  const std::size_t m = set.size();
  if (m > max_scatterers) {
    throw Error(Errc::SubsetBlowup, "explicit subset sum over " + std::to_string(m) +
                                        " scatterers exceeds cap " +
                                        std::to_string(max_scatterers));
  }
  const auto y = set.positions();
  const auto h = set.heights();
  double total = 0.0;
  const std::size_t subsets = std::size_t{1} << m;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    double term = 1.0;
    double previous = set.left_wall();
    int chosen = 0;
    for (std::size_t p = 0; p < m; ++p) {
      if ((mask >> p) & 1U) {
        term *= 2.0 * h[p] * std::sin(k * (y[p] - previous));
        previous = y[p];
        ++chosen;
      }
    }
    term *= std::sin(k * (set.right_wall() - previous));
    total += term * std::pow(k, static_cast<double>(static_cast<int>(m) - chosen));
  }
  return total;
}

Complex reflection_step(Complex previous, double y, double h, double k, double pole_floor) {
  const Complex ik(0.0, k);
  const Complex phase = std::polar(1.0, 2.0 * y * k);
  const Complex numerator = -h * phase + (ik - h) * previous;
  const Complex denominator = (ik + h) + h * std::conj(phase) * previous;
  if (std::abs(denominator) < pole_floor * std::abs(numerator)) {
    throw Error(Errc::RecursionPole, "reflection recursion pole at k = " + std::to_string(k) +
                                         ", y = " + std::to_string(y));
  }
  return numerator / denominator;
}

ReflectionVector reflection_coefficients(const ScattererSet& set, double k, double pole_floor) {
  if (!(k > 0.0)) throw Error(Errc::InvalidArgument, "reflection ratios need k > 0");
  const double length = set.length();
  const auto y = set.positions();
  const auto h = set.heights();

  ReflectionVector out;
  out.right_wall = -std::polar(1.0, k * length);
  out.values.reserve(set.size() + 1);
  Complex current = -std::polar(1.0, -k * length);
  out.values.push_back(current);
  for (std::size_t n = 0; n < set.size(); ++n) {
    current = reflection_step(current, y[n], h[n], k, pole_floor);
    if (n + 1 < set.size()) out.values.push_back(current);
  }
  out.carried = current;
  if (!set.empty()) out.values.push_back(out.right_wall);
  return out;
}

std::vector<Complex> scattering_coefficients(const ScattererSet& set, double k,
                                             const ReflectionVector& reflection) {
  const auto y = set.positions();
  const auto h = set.heights();
  std::vector<Complex> s(set.size());
  const Complex i_over_k(0.0, 1.0 / k);
  for (std::size_t n = 0; n < set.size(); ++n) {
    const Complex back = std::polar(1.0, -2.0 * y[n] * k) * reflection.values[n];
    s[n] = 1.0 - i_over_k * h[n] * (1.0 + back);
  }
  return s;
}

}  // namespace kp

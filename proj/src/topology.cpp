#include "kp/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "kp/errors.hpp"
#include "kp/parallel.hpp"

namespace kp {

namespace {

constexpr double pi = std::numbers::pi;

using Cx = std::complex<double>;

struct ComplexState {
  Cx psi;
  Cx dpsi;
};

ComplexState apply(const Mat2& m, const ComplexState& s) noexcept {
  return {m.a11 * s.psi + m.a12 * s.dpsi, m.a21 * s.psi + m.a22 * s.dpsi};
}

std::string describe(double q, double shift, std::size_t band) {
  std::ostringstream os;
  os.precision(17);
  os << "band " << band << " at q = " << q << ", delta = " << shift;
  return os.str();
}

}  // namespace

UnitCell::UnitCell(double a, std::vector<double> positions, std::vector<double> heights,
                   double shift)
    : a_(a), shift_(0.0), base_(std::move(positions)), base_heights_(std::move(heights)) {
  if (!(a_ > 0.0) || !std::isfinite(a_)) {
    throw Error(Errc::NonPositiveLength, "cell length must be positive and finite");
  }
  if (base_.size() != base_heights_.size()) {
    throw Error(Errc::InvalidArgument, "positions and heights differ in length");
  }
  for (std::size_t n = 0; n < base_.size(); ++n) {
    if (!(base_[n] >= 0.0 && base_[n] < a_)) {
      throw Error(Errc::PositionOutOfBox, "cell positions must lie in [0, a)");
    }
    if (!std::isfinite(base_heights_[n])) {
      throw Error(Errc::InvalidArgument, "heights must be finite");
    }
  }
  std::vector<double> sorted = base_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(Errc::NonMonotonePositions, "cell positions must be distinct");
  }
  if (!std::isfinite(shift)) throw Error(Errc::InvalidArgument, "shift must be finite");
  shift_ = shift - std::floor(shift);
  if (shift_ >= 1.0) shift_ = 0.0;

  std::vector<std::pair<double, double>> placed;
  placed.reserve(base_.size());
  for (std::size_t n = 0; n < base_.size(); ++n) {
    double y = base_[n] + shift_ * a_;
    if (y >= a_) y -= a_;
    if (y >= a_ || y < 0.0) y = 0.0;
    placed.emplace_back(y, base_heights_[n]);
  }
  std::sort(placed.begin(), placed.end());
  for (const auto& [y, h] : placed) {
    placed_.push_back(y);
    placed_heights_.push_back(h);
  }
}

UnitCell UnitCell::shifted(double shift) const {
  return UnitCell(a_, base_, base_heights_, shift);
}

Mat2 UnitCell::monodromy(double k) const noexcept {
  return transfer_matrix(Line{0.0, a_, placed_, placed_heights_}, k);
}

double UnitCell::discriminant(double k) const noexcept { return 0.5 * monodromy(k).trace(); }

double UnitCell::rotation_number(double k) const noexcept {
  // Dirichlet eigenvalues of the cell sit one per gap, so their count below k
  // fixes which band or gap k belongs to.
  const long dirichlet = interior_zeros(pruefer_angle(Line{0.0, a_, placed_, placed_heights_}, k));
  const double d = discriminant(k);
  if (std::abs(d) <= 1.0) {
    const long j = dirichlet + 1;
    const double angle = std::acos(d);
    return j % 2 == 1 ? (j - 1) * pi + angle : j * pi - angle;
  }
  // gap j has sign(D) = (-1)^j and holds Dirichlet eigenvalue j
  long j = dirichlet;
  if ((j % 2 == 0) != (d > 0.0)) ++j;
  return j * pi;
}

UnitCell simple_cell(double a, double height, double shift) {
  return UnitCell(a, {0.0}, {height}, shift);
}

double band_quasimomentum(const UnitCell& cell, double q, std::size_t band) {
  if (band == 0) throw Error(Errc::InvalidArgument, "bands are numbered from 1");
  const double a = cell.period();
  const double phase = std::abs(std::remainder(q * a, 2.0 * pi));
  const double j = static_cast<double>(band);
  const double target = band % 2 == 1 ? (j - 1.0) * pi + phase : j * pi - phase;
  // at the bottom edge of the band the whole gap below shares the target, and
  // the band's own end of it is the upper one
  const bool bottom = target <= (j - 1.0) * pi;
  auto below = [&](double k) {
    const double rho = cell.rotation_number(k);
    return bottom ? rho <= target : rho < target;
  };

  double lo = 1e-12 / a;
  if (!below(lo)) {
    throw Error(Errc::BandNotFound, describe(q, cell.shift(), band) + " reaches k = 0");
  }
  double hi = (j + 1.0) * pi / a;
  int grow = 0;
  while (below(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 60) {
      throw Error(Errc::BandNotFound, describe(q, cell.shift(), band) + ": window not closed");
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi;
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> bloch_bands(const UnitCell& cell, double q, std::size_t n_bands) {
  if (n_bands == 0) throw Error(Errc::InvalidArgument, "n_bands must be at least 1");
  std::vector<double> ks;
  ks.reserve(n_bands);
  for (std::size_t j = 1; j <= n_bands; ++j) ks.push_back(band_quasimomentum(cell, q, j));
  return ks;
}

BlochState bloch_state(const UnitCell& base, double q, double shift, std::size_t band,
                       std::size_t n_x) {
  if (n_x < 2) throw Error(Errc::InvalidArgument, "need at least two samples per cell");
  const UnitCell cell = base.shifted(shift);
  const double a = cell.period();
  BlochState state;
  state.q = q;
  state.shift = cell.shift();
  state.band = band;
  state.period = a;
  state.k = band_quasimomentum(cell, q, band);
  const double k = state.k;

  // eigenvector of the monodromy for the eigenvalue exp(i q a)
  const Mat2 t = cell.monodromy(k);
  const Cx lambda = std::polar(1.0, q * a);
  const ComplexState first{t.a12, lambda - t.a11};
  const ComplexState second{lambda - t.a22, t.a21};
  auto size = [k](const ComplexState& s) { return std::hypot(std::abs(s.psi), std::abs(s.dpsi) / k); };
  ComplexState s = size(first) >= size(second) ? first : second;
  const double scale =
      std::max({std::abs(t.a11), std::abs(t.a12) * k, std::abs(t.a21) / k, std::abs(t.a22), 1.0});
  if (size(s) < 1e-10 * scale) {
    throw Error(Errc::GapClosure, describe(q, cell.shift(), band) + ": degenerate monodromy");
  }
  const double len = size(s);
  s.psi /= len;
  s.dpsi /= len;

  const auto ys = cell.positions();
  const auto hs = cell.heights();
  state.u.resize(n_x);
  double x = 0.0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n_x; ++i) {
    const double xi = a * static_cast<double>(i) / static_cast<double>(n_x);
    while (next < ys.size() && ys[next] <= xi) {
      s = apply(delta_jump(hs[next]), apply(free_propagation(k, ys[next] - x), s));
      x = ys[next++];
    }
    s = apply(free_propagation(k, xi - x), s);
    x = xi;
    state.u[i] = std::polar(1.0, -q * xi) * s.psi;
  }

  double norm = 0.0;
  for (const Cx& v : state.u) norm += std::norm(v);
  norm = std::sqrt(norm * a / static_cast<double>(n_x));
  for (Cx& v : state.u) v /= norm;

  const auto pin = std::find_if(state.u.begin(), state.u.end(),
                                [](const Cx& v) { return std::abs(v) >= 1e-8; });
  if (pin == state.u.end()) {
    throw Error(Errc::GaugePinFailure, describe(q, cell.shift(), band) + ": all samples vanish");
  }
  const Cx rotate = std::conj(*pin) / std::abs(*pin);
  for (Cx& v : state.u) v *= rotate;
  *pin = std::abs(*pin);
  return state;
}

std::complex<double> cell_overlap(std::span<const std::complex<double>> lhs,
                                  std::span<const std::complex<double>> rhs, double period) {
  if (lhs.size() != rhs.size() || lhs.empty()) {
    throw Error(Errc::InvalidArgument, "overlap needs equal, nonempty sample grids");
  }
  Cx sum = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) sum += std::conj(lhs[i]) * rhs[i];
  return sum * (period / static_cast<double>(lhs.size()));
}

BerryGrid berry_grid(const UnitCell& cell, std::size_t band, std::size_t n_q,
                     std::size_t n_delta, std::size_t n_x, unsigned workers) {
  if (n_q < 2 || n_delta < 2) throw Error(Errc::InvalidArgument, "grid needs at least 2 x 2 points");
  BerryGrid grid;
  grid.n_q = n_q;
  grid.n_delta = n_delta;
  grid.band = band;
  grid.states.resize(n_q * n_delta);
  const double a = cell.period();
  parallel_for(n_q, workers, [&](std::size_t i) {
    const double q = -pi / a + 2.0 * pi * static_cast<double>(i) / (a * static_cast<double>(n_q));
    for (std::size_t j = 0; j < n_delta; ++j) {
      const double delta = static_cast<double>(j) / static_cast<double>(n_delta);
      grid.states[i * n_delta + j] = bloch_state(cell, q, delta, band, n_x);
    }
  });
  return grid;
}

void evaluate_chern(BerryGrid& grid) {
  const std::size_t nq = grid.n_q;
  const std::size_t nd = grid.n_delta;
  if (grid.states.size() != nq * nd || nq < 2 || nd < 2) {
    throw Error(Errc::InvalidArgument, "grid is not filled");
  }
  const std::size_t n_x = grid.states.front().u.size();
  const double a = grid.states.front().period;

  // crossing q = pi / a: u(q + G) = exp(-i G x) u(q)
  std::vector<Cx> wrapped(nd * n_x);
  for (std::size_t j = 0; j < nd; ++j) {
    const auto& u = grid.states[j].u;
    for (std::size_t m = 0; m < n_x; ++m) {
      wrapped[j * n_x + m] = std::polar(1.0, -2.0 * pi * static_cast<double>(m) / static_cast<double>(n_x)) * u[m];
    }
  }
  auto at = [&](std::size_t i, std::size_t j) -> std::span<const Cx> {
    j %= nd;
    if (i == nq) return std::span<const Cx>(wrapped).subspan(j * n_x, n_x);
    return grid.states[i * nd + j].u;
  };

  double smallest = std::numeric_limits<double>::infinity();
  auto link = [&](std::span<const Cx> l, std::span<const Cx> r) {
    const Cx o = cell_overlap(l, r, a);
    const double mag = std::abs(o);
    smallest = std::min(smallest, mag);
    return mag > 0.0 ? o / mag : Cx(0.0);
  };

  std::vector<Cx> uq(nq * nd), ud((nq + 1) * nd);
  for (std::size_t i = 0; i <= nq; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      if (i < nq) uq[i * nd + j] = link(at(i, j), at(i + 1, j));
      ud[i * nd + j] = i < nq ? link(at(i, j), at(i, j + 1)) : ud[j];
    }
  }
  grid.min_overlap = smallest;
  if (smallest < 0.1) {
    std::ostringstream os;
    os << "band " << grid.band << ": link overlap " << smallest << " on a " << nq << " x " << nd
       << " grid";
    throw Error(Errc::GapClosure, os.str());
  }

  grid.plaquettes.assign(nq * nd, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < nq; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      const Cx loop = uq[i * nd + j] * ud[(i + 1) * nd + j] *
                      std::conj(uq[i * nd + (j + 1) % nd]) * std::conj(ud[i * nd + j]);
      grid.plaquettes[i * nd + j] = std::arg(loop);
      sum += grid.plaquettes[i * nd + j];
    }
  }
  grid.raw_sum = sum / (2.0 * pi);
  grid.chern = static_cast<int>(std::lround(grid.raw_sum));
}

ChernResult chern_number(const UnitCell& cell, std::size_t band, std::size_t n_q,
                         std::size_t n_delta, std::size_t n_x, unsigned workers) {
  if (n_q < 8 || n_delta < 8) throw Error(Errc::InvalidArgument, "Chern grid needs N_q, N_delta >= 8");
  BerryGrid grid = berry_grid(cell, band, n_q, n_delta, n_x, workers);
  evaluate_chern(grid);
  return {band, grid.chern, n_q, n_delta, grid.raw_sum, grid.min_overlap};
}

std::vector<BulkGap> bulk_gaps(const UnitCell& cell, std::size_t n_bands) {
  if (n_bands < 2) throw Error(Errc::InvalidArgument, "bulk_gaps needs at least two bands");
  const double edge = pi / cell.period();
  std::vector<double> bottom, top;
  for (std::size_t j = 1; j <= n_bands; ++j) {
    const double k0 = band_quasimomentum(cell, 0.0, j);
    const double k1 = band_quasimomentum(cell, edge, j);
    bottom.push_back(0.5 * std::min(k0, k1) * std::min(k0, k1));
    top.push_back(0.5 * std::max(k0, k1) * std::max(k0, k1));
  }
  std::vector<BulkGap> gaps;
  for (std::size_t j = 0; j + 1 < n_bands; ++j) {
    BulkGap g{top[j], bottom[j + 1]};
    // touching bands are only resolved to ~sqrt(eps) in k
    if (g.hi - g.lo <= 1e-7 * g.hi) g.hi = g.lo;
    gaps.push_back(g);
  }
  return gaps;
}

}  // namespace kp

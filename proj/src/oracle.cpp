#include "kp/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kp/eigensolve.hpp"
#include "kp/errors.hpp"

namespace kp {

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  double off = 0.0;
};

struct Discretized {
  Tridiagonal matrix;
  double dx = 0.0;
  double max_snap_error = 0.0;
  std::size_t dropped = 0;
};

Discretized discretize(const ScattererSet& set, std::size_t n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "oracle grid needs at least two points");
  Discretized d;
  d.dx = set.length() / static_cast<double>(n + 1);
  const double t = 0.5 / (d.dx * d.dx);
  d.matrix.diag.assign(n, 2.0 * t);
  d.matrix.off = -t;
  std::vector<bool> taken(n + 2, false);
  for (std::size_t s = 0; s < set.size(); ++s) {
    const double y = set.positions()[s];
    const auto i = static_cast<std::size_t>(std::llround((y - set.left_wall()) / d.dx));
    d.max_snap_error = std::max(d.max_snap_error, std::abs(set.left_wall() + i * d.dx - y));
    if (taken[i]) {
      std::ostringstream os;
      os << "scatterer " << s << " lands on an occupied grid point (" << i << ") at N = " << n;
      throw Error(Errc::GridTooCoarse, os.str());
    }
    taken[i] = true;
    if (i == 0 || i == n + 1) {
      ++d.dropped;
      continue;
    }
    d.matrix.diag[i - 1] += set.heights()[s] / d.dx;
  }
  return d;
}

// Eigenvalues strictly below x (Sturm count of the LDL^T pivots).
std::size_t count_below(const Tridiagonal& m, double x) {
  std::size_t count = 0;
  const double off2 = m.off * m.off;
  double pivot = 1.0;
  for (std::size_t i = 0; i < m.diag.size(); ++i) {
    pivot = m.diag[i] - x - (i == 0 ? 0.0 : off2 / pivot);
    if (pivot == 0.0) pivot = -std::numeric_limits<double>::epsilon() * (std::abs(m.off) + std::abs(x));
    if (pivot < 0.0) ++count;
  }
  return count;
}

// j-th eigenvalue (0-based) by bisection.
double eigenvalue(const Tridiagonal& m, std::size_t j, double lo, double hi) {
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (count_below(m, mid) > j ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FdSpectrum fd_spectrum(const ScattererSet& set, std::size_t n, std::size_t m) {
  if (m == 0 || m > n) throw Error(Errc::InvalidArgument, "eigencount must be in [1, N]");
  const Discretized d = discretize(set, n);
  const auto [lo_it, hi_it] = std::minmax_element(d.matrix.diag.begin(), d.matrix.diag.end());
  const double lo = *lo_it - 2.0 * std::abs(d.matrix.off) - 1.0;
  const double hi = *hi_it + 2.0 * std::abs(d.matrix.off) + 1.0;
  FdSpectrum out;
  out.n = n;
  out.dx = d.dx;
  out.max_snap_error = d.max_snap_error;
  out.dropped = d.dropped;
  out.energies.reserve(m);
  for (std::size_t j = 0; j < m; ++j) out.energies.push_back(eigenvalue(d.matrix, j, lo, hi));
  return out;
}

std::vector<double> fd_eigenvector(const ScattererSet& set, std::size_t n, double energy) {
  const Discretized d = discretize(set, n);
  const double shift = energy * (1.0 + 1e-10) + 1e-12;
  std::vector<double> v(n, 1.0), next(n), c(n), diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = d.matrix.diag[i] - shift;
  for (int iter = 0; iter < 4; ++iter) {
    // Thomas algorithm for (H - shift) next = v
    const double e = d.matrix.off;
    c[0] = e / diag[0];
    next[0] = v[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double denom = diag[i] - e * c[i - 1];
      c[i] = e / denom;
      next[i] = (v[i] - e * next[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) next[i] -= c[i] * next[i + 1];
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm * d.dx);
    for (std::size_t i = 0; i < n; ++i) v[i] = next[i] / norm;
  }
  const auto peak = std::max_element(v.begin(), v.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*peak < 0.0) {
    for (double& x : v) x = -x;
  }
  return v;
}

OracleComparison compare(const ScattererSet& set, std::size_t m, std::size_t n) {
  if (m == 0) throw Error(Errc::InvalidArgument, "eigencount must be positive");
  OracleComparison out;
  out.bound = bound_state_count(set);
  const auto roots = find_lowest_roots(set, m + 1);
  for (std::size_t j = 0; j < m; ++j) out.bethe.push_back(roots[j].energy);
  const double cut = 0.5 * (roots[m - 1].energy + roots[m].energy);
  const std::size_t total = m + out.bound;
  const FdSpectrum fd = fd_spectrum(set, n, std::min(n, total + 1));
  out.fd_count = static_cast<std::size_t>(
      std::count_if(fd.energies.begin(), fd.energies.end(), [cut](double e) { return e < cut; }));
  if (out.fd_count != total) {
    std::ostringstream os;
    os << "oracle finds " << out.fd_count << " states below E = " << cut << ", exact solver "
       << total << " (" << out.bound << " bound)";
    throw Error(Errc::CountMismatch, os.str());
  }
  const auto first = fd.energies.begin() + static_cast<std::ptrdiff_t>(out.bound);
  out.fd.assign(first, first + static_cast<std::ptrdiff_t>(m));
  for (std::size_t j = 0; j < m; ++j) {
    out.max_relative_error =
        std::max(out.max_relative_error, std::abs(out.fd[j] - out.bethe[j]) / std::abs(out.bethe[j]));
  }
  return out;
}

std::vector<double> fd_ring_spectrum(const UnitCell& cell, double q, std::size_t n, std::size_t m) {
  if (n < 3 || m == 0 || m > n) throw Error(Errc::InvalidArgument, "ring needs N >= 3 and 1 <= m <= N");
  const double a = cell.period();
  const double dx = a / static_cast<double>(n);
  const double t = 0.5 / (dx * dx);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    h(ii, ii) = 2.0 * t;
    if (i + 1 < n) {
      h(ii, ii + 1) = -t;
      h(ii + 1, ii) = -t;
    }
  }
  const auto last = static_cast<Eigen::Index>(n - 1);
  const std::complex<double> twist = std::polar(1.0, q * a);
  h(last, 0) = -t * twist;
  h(0, last) = -t * std::conj(twist);
  std::vector<bool> taken(n, false);
  for (std::size_t s = 0; s < cell.size(); ++s) {
    const auto i = static_cast<std::size_t>(std::llround(cell.positions()[s] / dx)) % n;
    if (taken[i]) throw Error(Errc::GridTooCoarse, "two cell scatterers share a ring point");
    taken[i] = true;
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += cell.heights()[s] / dx;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = solver.eigenvalues()(static_cast<Eigen::Index>(j));
  return out;
}

}  // namespace kp

#include "kp/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include "kp/bethe.hpp"
#include "kp/errors.hpp"
#include "kp/parallel.hpp"

namespace kp {

QuasimomentumRoot make_root(double k, double k_lo, double k_hi, double residual,
                            bool flagged) noexcept {
  return {k, 0.5 * k * k, k_lo, k_hi, residual, flagged};
}

namespace {

using Function = std::function<double(double)>;

std::string interval(double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << lo << ", " << hi << ")";
  return os.str();
}

// Bisection down to adjacent doubles; returns the end with the smaller |f|.
double polish(const Function& f, double a, double fa, double b, double fb) {
  if (a > b) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  while (std::nextafter(a, b) < b) {
    const double m = a + 0.5 * (b - a);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

// Brent's method on a bracket with f(lo) f(hi) < 0. Where the mismatch is
// very steep (states decaying towards the right wall) the tol_rel bracket can
// still leave a visible residual; the bracket is then bisected to machine
// resolution.
double refine(const Function& f, double lo, double hi, double f_lo, double f_hi,
              const SolverOptions& options) {
  double a = lo, b = hi, fa = f_lo, fb = f_hi;
  double c = a, fc = fa, d = b - a, e = d;
  const double rel = options.tol_rel;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                       0.5 * rel * std::abs(b);
    const double mid = 0.5 * (c - b);
    if (fb == 0.0) return b;
    if (std::abs(mid) <= tol) {
      if (std::abs(fb) <= options.tangent_floor) return b;
      return polish(f, b, fb, c, fc);
    }
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * mid * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * mid * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * mid * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = mid;
        e = d;
      }
    } else {
      d = mid;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (mid > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw Error(Errc::BracketExhaustion,
              "root refinement did not converge in " + interval(lo, hi));
}

struct Probe {
  std::optional<double> split;    // point of opposite sign
  double argmin = 0.0;
  double value = 0.0;             // |f| at argmin
};

// Golden-section search for the minimum of |f| on [lo, hi] where f keeps the
// sign `sign` at the ends. Stops early at any sample of the opposite sign.
Probe probe_minimum(const Function& f, double lo, double hi, double sign,
                    const SolverOptions& options) {
  constexpr double ratio = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
  double f1 = sign * f(x1), f2 = sign * f(x2);
  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (f1 <= 0.0) return {x1, x1, std::abs(f1)};
    if (f2 <= 0.0) return {x2, x2, std::abs(f2)};
    if (b - a <= options.tol_rel * std::abs(b)) break;
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = sign * f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = sign * f(x2);
    }
  }
  return f1 < f2 ? Probe{std::nullopt, x1, f1} : Probe{std::nullopt, x2, f2};
}

struct Bracket {
  double lo, hi, f_lo, f_hi;
  double cell_lo, cell_hi;
};

}  // namespace

std::vector<QuasimomentumRoot> find_roots(const ScattererSet& set, double k_max,
                                          const SolverOptions& options) {
  if (!(k_max > 0.0)) throw Error(Errc::InvalidArgument, "k_max must be positive");
  std::vector<QuasimomentumRoot> roots;
  if (k_max <= options.k_min) return roots;

  const Function f = [&set](double k) { return bethe_mismatch(set, k); };
  const double step = std::numbers::pi /
                      (set.length() * options.q_factor * static_cast<double>(set.size() + 1));
  const auto cells = static_cast<std::size_t>(std::ceil((k_max - options.k_min) / step));
  std::vector<double> grid(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    grid[i] = std::min(k_max, options.k_min + static_cast<double>(i) * step);
  }
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), options.workers, [&](std::size_t i) { values[i] = f(grid[i]); });

  std::vector<Bracket> brackets;
  std::vector<QuasimomentumRoot> exact;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (values[i] == 0.0 && i > 0) {
      exact.push_back(make_root(grid[i], grid[i - 1], grid[i + 1], 0.0));
      continue;
    }
    if (values[i] * values[i + 1] < 0.0) {
      brackets.push_back({grid[i], grid[i + 1], values[i], values[i + 1], grid[i], grid[i + 1]});
    }
  }

  // Pairs of close roots and tangential zeros leave no sign change on the
  // grid; they show up as a local minimum of |f| between same-sign samples.
  std::vector<std::size_t> dips;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double s = values[i];
    if (s == 0.0 || values[i - 1] * s <= 0.0 || values[i + 1] * s <= 0.0) continue;
    if (std::abs(s) <= std::abs(values[i - 1]) && std::abs(s) <= std::abs(values[i + 1])) {
      dips.push_back(i);
    }
  }
  std::vector<Probe> probes(dips.size());
  parallel_for(dips.size(), options.workers, [&](std::size_t j) {
    const std::size_t i = dips[j];
    probes[j] = probe_minimum(f, grid[i - 1], grid[i + 1], values[i] > 0.0 ? 1.0 : -1.0, options);
  });
  std::vector<QuasimomentumRoot> tangential;
  for (std::size_t j = 0; j < dips.size(); ++j) {
    const std::size_t i = dips[j];
    const Probe& p = probes[j];
    if (p.split) {
      const double fs = f(*p.split);
      if (fs == 0.0) {
        tangential.push_back(make_root(*p.split, grid[i - 1], grid[i + 1], 0.0, true));
        continue;
      }
      brackets.push_back({grid[i - 1], *p.split, values[i - 1], fs, grid[i - 1], grid[i + 1]});
      brackets.push_back({*p.split, grid[i + 1], fs, values[i + 1], grid[i - 1], grid[i + 1]});
    } else if (p.value < options.tangent_floor) {
      tangential.push_back(make_root(p.argmin, grid[i - 1], grid[i + 1], p.value, true));
    }
  }

  std::vector<QuasimomentumRoot> refined(brackets.size());
  parallel_for(brackets.size(), options.workers, [&](std::size_t j) {
    const Bracket& b = brackets[j];
    const double k = refine(f, b.lo, b.hi, b.f_lo, b.f_hi, options);
    refined[j] = make_root(k, b.cell_lo, b.cell_hi, std::abs(f(k)));
  });

  roots.reserve(refined.size() + exact.size() + tangential.size());
  roots.insert(roots.end(), refined.begin(), refined.end());
  roots.insert(roots.end(), exact.begin(), exact.end());
  roots.insert(roots.end(), tangential.begin(), tangential.end());
  std::sort(roots.begin(), roots.end(),
            [](const auto& a, const auto& b) { return a.k < b.k; });

  std::vector<QuasimomentumRoot> merged;
  for (const auto& r : roots) {
    if (!merged.empty() && r.k - merged.back().k < options.tol_sep) {
      auto& kept = merged.back();
      if (r.residual < kept.residual) {
        const bool flag = kept.multiplicity_flag;
        kept = r;
        kept.multiplicity_flag = flag;
      }
      kept.multiplicity_flag = true;
      continue;
    }
    merged.push_back(r);
  }
  return merged;
}

std::vector<QuasimomentumRoot> find_lowest_roots(const ScattererSet& set, std::size_t count,
                                                 const SolverOptions& options) {
  if (count == 0) return {};
  double k_max = std::numbers::pi * static_cast<double>(count + 1) / set.length();
  for (int attempt = 0; attempt < 40; ++attempt) {
    auto roots = find_roots(set, k_max, options);
    if (roots.size() >= count) {
      roots.resize(count);
      return roots;
    }
    k_max *= 1.5;
  }
  throw Error(Errc::BracketExhaustion, "could not collect " + std::to_string(count) + " roots");
}

std::size_t count_states_below(const ScattererSet& set, double energy) {
  if (!(energy > 0.0)) throw Error(Errc::InvalidArgument, "energy must be positive");
  const double k = std::sqrt(2.0 * energy);
  return static_cast<std::size_t>(interior_zeros(pruefer_angle(line_of(set), k)));
}

std::size_t bound_state_count(const ScattererSet& set, const SolverOptions& options) {
  return count_states_below(set, 0.5 * options.k_min * options.k_min);
}

}  // namespace kp

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kp/errors.hpp"
#include "kp/wavefunction.hpp"
#include "test_support.hpp"

using namespace kp;
using std::numbers::pi;

namespace {

double riemann_norm(const EigenState& s, int samples) {
  const double a = s.set.left_wall(), b = s.set.right_wall();
  const double dx = (b - a) / samples;
  double total = 0.0;
  for (int i = 0; i < samples; ++i) total += std::norm(evaluate(s, a + (i + 0.5) * dx));
  return total * dx;
}

// composite Simpson on each region with n panels
double simpson_norm(const EigenState& s, int panels) {
  double total = 0.0;
  for (std::size_t r = 0; r < s.set.region_count(); ++r) {
    const auto region = s.set.region(r);
    const double h = (region.right - region.left) / panels;
    if (h <= 0.0) continue;
    auto f = [&](double x) { return std::norm(evaluate_in_region(s, r, x)); };
    double sum = f(region.left) + f(region.right);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(region.left + i * h);
    total += sum * h / 3.0;
  }
  return total;
}

}  // namespace

TEST_CASE("box ground state") {
  const ScattererSet box(1.0, {}, {});
  const auto state = build_state(box, make_root(pi, 3.0, 3.2, 0.0));
  CHECK(state.norm == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(evaluate(state, -0.5) == Complex(0.0));
  CHECK(evaluate(state, 0.5) == Complex(0.0));
  CHECK(std::abs(evaluate(state, 0.0)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(edge_weight(state, 0.25) == doctest::Approx(0.5 - 1.0 / pi).epsilon(1e-12));
  CHECK(edge_weight(state, 0.5) == doctest::Approx(1.0).epsilon(1e-12));

  const auto grid = density_grid(state, 3);
  REQUIRE(grid.size() == 3);
  CHECK(grid[0].x == -0.5);
  CHECK(grid[0].density == 0.0);
  CHECK(grid[1].x == 0.0);
  CHECK(grid[1].density == doctest::Approx(2.0));
  CHECK(grid[2].x == 0.5);
  CHECK(grid[2].density == 0.0);

  CHECK_THROWS_AS(evaluate(state, 0.51), Error);
  CHECK_THROWS_AS(density_grid(state, 1), Error);
  CHECK_THROWS_AS(edge_weight(state, 0.0), Error);
}

TEST_CASE("centred barrier states") {
  const ScattererSet set(2.0, {0.0}, {1.0});
  const auto roots = find_roots(set, 4.0);
  REQUIRE(roots.size() == 2);

  const auto odd = build_state(set, roots[1]);
  CHECK(std::abs(evaluate(odd, 0.0)) < 1e-12);
  const Complex jump = derivative_in_region(odd, 1, 0.0) - derivative_in_region(odd, 0, 0.0);
  CHECK(std::abs(jump) < 1e-12);

  const auto even = build_state(set, roots[0]);
  for (double x = 0.0; x <= 1.0; x += 0.01) {
    CHECK(std::abs(std::abs(evaluate(even, x)) - std::abs(evaluate(even, -x))) < 1e-9);
  }
  CHECK(std::abs(overlap(even, odd)) < 1e-12);
}

TEST_CASE("false roots are rejected") {
  const ScattererSet set(2.0, {0.0}, {1.0});
  CHECK_THROWS_AS(build_state(set, make_root(2.5, 2.4, 2.6, 0.0)), Error);
  CHECK_THROWS_AS(build_state(set, make_root(pi, 3.0, 3.2, 0.1)), Error);
}

TEST_CASE("states that decay towards the right wall are accepted") {
  // the mismatch moves by ~3e-8 per ulp of k here, so the tolerance on the
  // residual alone cannot be met
  for (double phi : {0.2709030100334448, 0.3010033444816054, 0.3311036789297659}) {
    const auto set = modulated_lattice(18.0, 17, 0.1, 1.5, phi);
    for (const auto& root : find_roots(set, 2.0)) {
      const auto state = build_state(set, root);
      CHECK(simpson_norm(state, 4000) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("closed-form norm matches quadrature on an asymmetric instance") {
  const ScattererSet set(3.0, {-0.9, 0.35}, {0.8, 2.3});
  for (const auto& root : find_roots(set, 9.0)) {
    const auto state = build_state(set, root);
    CHECK(simpson_norm(state, 2000) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("explicit coefficients match the scattering chain") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const auto set = testing::random_instance(rng, 1 + trial % 7, 6.0, -0.4, 2.0);
    for (const auto& root : find_roots(set, 6.0)) {
      const auto state = build_state(set, root);
      const auto direct = explicit_coefficients(set, root.k);
      for (std::size_t n = 0; n < direct.size(); ++n) {
        CHECK(std::abs(state.norm * direct[n] - state.forward[n]) <
              1e-9 * std::abs(state.forward[n]) + 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(explicit_coefficients(uniform_lattice(14.0, 13, 0.4, 0.0), 1.0), Error);
}

TEST_CASE("state invariants on random instances") {
  std::mt19937_64 rng(2024);
  int instances = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double length = 3.0 + trial % 6;
    const auto set = testing::random_instance(rng, 1 + trial % 9, length, -0.5, 2.5);
    if (bound_state_count(set) > 0) continue;
    ++instances;
    const auto roots = find_roots(set, 8.0);
    std::vector<EigenState> states;
    for (const auto& root : roots) states.push_back(build_state(set, root));

    for (const auto& s : states) {
      double peak = 0.0;
      for (const auto& a : s.forward) peak = std::max(peak, 2.0 * std::abs(a));
      const auto r = reflection_coefficients(set, s.k());
      for (std::size_t n = 0; n < s.forward.size(); ++n) {
        CHECK(std::abs(s.backward[n] + std::conj(s.forward[n])) < 1e-9 * peak);
        const Complex ratio = n < set.size() ? r.values[n] : r.carried;
        CHECK(std::abs(s.backward[n] - ratio * s.forward[n]) < 1e-12 * peak);
      }
      for (std::size_t n = 0; n < set.size(); ++n) {
        const double y = set.positions()[n];
        const Complex left = evaluate_in_region(s, n, y);
        const Complex right = evaluate_in_region(s, n + 1, y);
        CHECK(std::abs(left - right) < 1e-9 * peak);
        const Complex jump = derivative_in_region(s, n + 1, y) - derivative_in_region(s, n, y);
        CHECK(std::abs(jump - 2.0 * set.heights()[n] * left) < 1e-8 * s.k() * peak);
      }
      CHECK(interval_probability(s, set.left_wall(), set.right_wall()) ==
            doctest::Approx(1.0).epsilon(1e-10));
    }
    if (!states.empty()) {
      CHECK(riemann_norm(states.front(), 100000) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(riemann_norm(states.back(), 100000) == doctest::Approx(1.0).epsilon(1e-6));
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = i + 1; j < states.size(); ++j) {
        CHECK(std::abs(overlap(states[i], states[j])) < 1e-8);
      }
    }
  }
  CHECK(instances >= 40);
}

TEST_CASE("density grid integrates to one") {
  const auto set = uniform_lattice(11.0, 11, 0.4, 0.3);
  const auto roots = find_roots(set, 4.0);
  const auto state = build_state(set, roots[5]);
  for (std::size_t n : {1001u, 4001u}) {
    const auto grid = density_grid(state, n);
    CHECK(grid.front().density == 0.0);
    CHECK(grid.back().density == 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      CHECK(grid[i].density >= 0.0);
      sum += 0.5 * (grid[i].density + grid[i + 1].density) * (grid[i + 1].x - grid[i].x);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(2e-4 * (1001.0 / n) * (1001.0 / n)));
  }
}

TEST_CASE("in-gap state of the shifted lattice lives at an edge") {
  auto gap_state = [](double shift) {
    const auto set = uniform_lattice(11.0, 11, 0.4, shift);
    const auto roots = find_roots(set, 3.5);
    REQUIRE(roots.size() == 11);
    return build_state(set, roots[10]);
  };
  const auto edge = gap_state(0.5);
  const auto& set = edge.set;
  // the weak h = 0.4 lattice decays by about exp(-0.25) per cell in
  // the middle of the gap, so one period per side holds a quarter
  const double weight = edge_weight(edge, 1.0 / 11.0);
  CHECK(weight == doctest::Approx(0.2530).epsilon(1e-3));
  CHECK(interval_probability(edge, set.left_wall(), 0.0) > 0.75);
  CHECK(edge_weight(edge, 0.25) > 0.6);
  CHECK(interval_probability(gap_state(-0.5), 0.0, set.right_wall()) > 0.75);

  // localization is strongest in the middle of the shift range
  for (double shift : {-0.9, -0.25, 0.0, 0.25, 0.75}) {
    CHECK(edge_weight(gap_state(shift), 1.0 / 11.0) < weight);
  }

  const auto grid = density_grid(edge, 512);
  const auto peak = std::max_element(grid.begin(), grid.end(),
                                     [](const auto& a, const auto& b) { return a.density < b.density; });
  CHECK(std::min(peak->x - set.left_wall(), set.right_wall() - peak->x) < 1.0);

  // bulk states are spread over the box
  const auto roots = find_roots(set, 3.5);
  CHECK(edge_weight(build_state(set, roots[4]), 1.0 / 11.0) < 0.2);
}

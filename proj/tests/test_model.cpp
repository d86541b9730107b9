#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kp/errors.hpp"
#include "kp/model.hpp"

using namespace kp;

namespace {

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected kp::Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("scatterer set validation") {
  const ScattererSet box(1.0, {}, {});
  CHECK(box.empty());
  CHECK(box.region_count() == 1);
  CHECK(box.region(0).left == -0.5);
  CHECK(box.region(0).right == 0.5);

  CHECK(error_of([] { ScattererSet(1.0, {0.3, 0.1}, {1.0, 1.0}); }) ==
        Errc::NonMonotonePositions);
  CHECK(error_of([] { ScattererSet(1.0, {0.1, 0.1}, {1.0, 1.0}); }) ==
        Errc::NonMonotonePositions);
  CHECK(error_of([] { ScattererSet(1.0, {0.6}, {1.0}); }) == Errc::PositionOutOfBox);
  CHECK(error_of([] { ScattererSet(0.0, {}, {}); }) == Errc::NonPositiveLength);
  CHECK(error_of([] { ScattererSet(-2.0, {}, {}); }) == Errc::NonPositiveLength);
  CHECK(error_of([] { ScattererSet(1.0, {0.1}, {}); }) == Errc::InvalidArgument);

  // walls are part of the closed interval
  const ScattererSet edge(2.0, {-1.0, 1.0}, {0.5, 0.5});
  CHECK(edge.size() == 2);
}

TEST_CASE("regions tile the box") {
  const ScattererSet set(4.0, {-1.0, 0.5, 1.5}, {1.0, -0.2, 3.0});
  double covered = 0.0;
  double previous = set.left_wall();
  for (std::size_t n = 0; n < set.region_count(); ++n) {
    const auto r = set.region(n);
    CHECK(r.left == previous);
    covered += r.right - r.left;
    previous = r.right;
  }
  CHECK(previous == set.right_wall());
  CHECK(covered == doctest::Approx(4.0));
  CHECK(set.region_of(-2.0) == 0);
  CHECK(set.region_of(-1.0) == 0);
  CHECK(set.region_of(0.0) == 1);
  CHECK(set.region_of(1.9) == 3);
}

TEST_CASE("uniform lattice positions") {
  const auto set = uniform_lattice(11.0, 11, 0.4, 0.0);
  REQUIRE(set.size() == 11);
  CHECK(set.positions().front() == doctest::Approx(-5.0));
  CHECK(set.positions().back() == doctest::Approx(5.0));

  const auto right = uniform_lattice(11.0, 11, 0.4, 1.0);
  CHECK(right.positions().back() == 5.5);
  const auto left = uniform_lattice(11.0, 11, 0.4, -1.0);
  CHECK(left.positions().front() == -5.5);

  for (double shift : {-1.0, -0.73, -0.5, 0.0, 0.25, 0.5, 0.99, 1.0}) {
    const auto s = uniform_lattice(11.0, 11, 0.4, shift);
    for (std::size_t n = 1; n < s.size(); ++n) {
      CHECK(s.positions()[n] - s.positions()[n - 1] == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(uniform_lattice(11.0, 11, 0.4, 1.5), Error);
  CHECK_THROWS_AS(uniform_lattice(11.0, 0, 0.4, 0.0), Error);
}

TEST_CASE("modulated lattice") {
  for (double h : modulated_heights(9, 0.1, 1.5, 0.0)) CHECK(h == doctest::Approx(1.5));

  const auto set = modulated_lattice(18.0, 17, 0.1, 1.5, 2.3);
  CHECK(set.size() == 17);
  for (std::size_t n = 1; n < set.size(); ++n) {
    CHECK(set.positions()[n] - set.positions()[n - 1] == doctest::Approx(1.0));
  }
  CHECK(flux_period(17) == 9.0);

  // odd M: the modulation repeats after (M+1)/2
  for (std::size_t m : {5u, 7u, 17u}) {
    for (double phi : {0.0, 0.37, 1.9, 4.4}) {
      const auto a = modulated_heights(m, 0.1, 2.1, phi);
      const auto b = modulated_heights(m, 0.1, 2.1, phi + flux_period(m));
      for (std::size_t n = 0; n < m; ++n) CHECK(std::abs(a[n] - b[n]) < 1e-12);
    }
  }

  // heights stay inside the modulation range, including reversed bounds
  for (double phi = 0.0; phi <= 9.0; phi += 0.173) {
    for (double h : modulated_heights(17, -0.5, 0.5, phi)) {
      CHECK(h >= -0.5);
      CHECK(h <= 0.5);
    }
    for (double h : modulated_heights(17, 1.5, 0.1, phi)) {
      CHECK(h >= 0.1);
      CHECK(h <= 1.5);
    }
  }
}

TEST_CASE("random heights are reproducible") {
  const auto a = random_heights(11, 0.1, 1.4, 42);
  const auto b = random_heights(11, 0.1, 1.4, 42);
  CHECK(a == b);
  CHECK(random_heights(11, 0.1, 1.4, 43) != a);
  for (double h : a) {
    CHECK(h >= 0.1);
    CHECK(h <= 1.4);
  }
  for (double h : random_heights(11, 0.7, 0.7, 9)) CHECK(h == 0.7);

  // first draw of mt19937_64 with the default seed is 14514284786278117030
  const auto first = random_heights(1, 0.0, 1.0, 5489);
  CHECK(first[0] == static_cast<double>(14514284786278117030ULL >> 11) * 0x1.0p-53);
  CHECK_THROWS_AS(random_heights(3, 1.0, 0.0, 1), Error);
}

TEST_CASE("instance JSON schema") {
  using nlohmann::json;
  const auto explicit_set = instance_from_json(
      json::parse(R"({"L": 2, "scatterers": [{"y": -0.5, "h": 1}, {"y": 0.25, "h": -0.3}]})"));
  CHECK(explicit_set.size() == 2);
  CHECK(explicit_set.heights()[1] == -0.3);
  CHECK(instance_from_json(to_json(explicit_set)) == explicit_set);

  const auto uniform =
      instance_from_json(json::parse(R"({"uniform": {"L": 11, "M": 11, "h": 0.4, "delta": 0.5}})"));
  CHECK(uniform == uniform_lattice(11.0, 11, 0.4, 0.5));

  const auto modulated = instance_from_json(
      json::parse(R"({"modulated": {"L": 18, "M": 17, "h_min": 0.1, "h_max": 1.5, "phi": 2}})"));
  CHECK(modulated == modulated_lattice(18.0, 17, 0.1, 1.5, 2.0));

  const auto random = instance_from_json(
      json::parse(R"({"random": {"L": 11, "M": 11, "h_min": 0.1, "h_max": 1.4, "seed": 5}})"));
  CHECK(random == uniform_lattice(11.0, random_heights(11, 0.1, 1.4, 5), 0.0));

  const auto alternating = instance_from_json(
      json::parse(R"({"alternating": {"L": 11, "M": 11, "h1": 0.4, "h2": 1.4}})"));
  CHECK(alternating.heights()[0] == 0.4);
  CHECK(alternating.heights()[1] == 1.4);

  CHECK(instance_from_json(json::parse(R"({"box": {"L": 3}})")).empty());

  CHECK(error_of([] { instance_from_json(json::parse(R"({"uniform": {"L": 11}})")); }) ==
        Errc::ConfigError);
  CHECK(error_of([] { instance_from_json(json::parse(R"({"what": 1})")); }) == Errc::ConfigError);
  CHECK(error_of([] {
          instance_from_json(json::parse(R"({"L": 1, "scatterers": [{"y": 0.3, "h": 1}, {"y": 0.1, "h": 1}]})"));
        }) == Errc::NonMonotonePositions);
}

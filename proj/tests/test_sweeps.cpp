#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "kp/errors.hpp"
#include "kp/io.hpp"
#include "kp/sweeps.hpp"

using namespace kp;
using std::numbers::pi;

namespace {

ShiftSweep small_shift() {
  ShiftSweep s;
  s.length = 7.0;
  s.count = 7;
  s.heights = HeightSpec::uniform(0.4);
  s.deltas = ParamGrid::linspace(-1.0, 1.0, 9);
  s.k_max = 5.0;
  return s;
}

FluxSweep small_flux() {
  FluxSweep s;
  s.count = 7;
  s.phis = ParamGrid::linspace(0.0, 4.0, 9);
  s.k_max = 7.0;
  return s;
}

}  // namespace

TEST_CASE("parameter grids") {
  const auto v = ParamGrid::linspace(-1.0, 1.0, 5).values();
  REQUIRE(v.size() == 5);
  CHECK(v.front() == -1.0);
  CHECK(v[2] == 0.0);
  CHECK(v.back() == 1.0);
  CHECK(ParamGrid::linspace(0.3, 2.0, 1).values() == std::vector<double>{0.3});
  CHECK(ParamGrid::of({0.1, 0.7}).values() == std::vector<double>{0.1, 0.7});
  CHECK(param_grid_from_json(to_json(ParamGrid::of({0.1, 0.7}))).values().size() == 2);
  CHECK_THROWS_AS(param_grid_from_json(nlohmann::json::array()), Error);
}

TEST_CASE("height specifications round trip") {
  for (const auto& spec : {HeightSpec::uniform(0.4), HeightSpec::alternating(0.2, -0.3),
                           HeightSpec::random(-0.5, 0.5, 99),
                           HeightSpec::explicit_values({0.1, 0.2, 0.3})}) {
    const auto back = height_spec_from_json(to_json(spec));
    CHECK(back.heights(3) == spec.heights(3));
  }
  CHECK_THROWS_AS(HeightSpec::explicit_values({0.1}).heights(3), Error);
  CHECK_THROWS_AS(height_spec_from_json({{"sawtooth", 1}}), Error);
}

TEST_CASE("edge fraction defaults to one lattice period") {
  CHECK(sweep_edge_fraction(0.0, 11) == doctest::Approx(1.0 / 11.0));
  CHECK(sweep_edge_fraction(0.2, 11) == 0.2);
  CHECK(sweep_edge_fraction(0.0, 1) == 0.5);
  FluxSweep f;
  f.count = 17;
  CHECK(flux_length(f) == 18.0);
}

TEST_CASE("zero heights reproduce the empty box at every shift") {
  auto s = small_shift();
  s.heights = HeightSpec::uniform(0.0);
  const auto table = sweep_shift(s);
  for (double delta : s.deltas.values()) {
    const auto rows = table.at(delta);
    REQUIRE(rows.size() == 11);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      CHECK(rows[j].state_index == j + 1);
      CHECK(rows[j].k == doctest::Approx(pi * static_cast<double>(j + 1) / 7.0).epsilon(1e-10));
      CHECK(rows[j].energy == doctest::Approx(0.5 * rows[j].k * rows[j].k));
    }
  }
}

TEST_CASE("mirror symmetry of the shift spectrum") {
  const auto s = small_shift();
  const auto table = sweep_shift(s);
  for (double delta : s.deltas.values()) {
    const auto a = table.at(delta);
    const auto b = table.at(-delta);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(a[j].k == doctest::Approx(b[j].k).epsilon(1e-10));
      CHECK(a[j].edge_weight == doctest::Approx(b[j].edge_weight).epsilon(1e-6));
    }
  }
}

TEST_CASE("flux sweep is periodic and pins the flat states") {
  auto s = small_flux();
  s.phis = ParamGrid::of({0.0, 0.7, 1.9, 3.3, flux_period(7)});
  const auto table = sweep_flux(s);
  const auto first = table.at(0.0);
  const auto last = table.at(flux_period(7));
  REQUIRE(first.size() == last.size());
  for (std::size_t j = 0; j < first.size(); ++j) {
    CHECK(first[j].k == doctest::Approx(last[j].k).epsilon(1e-10));
  }
  for (double phi : s.phis.values()) {
    const auto rows = table.at(phi);
    for (int l = 1; l <= 2; ++l) {
      const double flat = pi * l;
      bool found = false;
      for (const auto& r : rows) found = found || std::abs(r.k - flat) < 1e-9;
      CHECK_MESSAGE(found, "phi = " << phi << ", l = " << l);
    }
  }
}

TEST_CASE("state indices skip bound states") {
  auto s = small_shift();
  s.heights = HeightSpec::uniform(-0.8);
  const auto rows = sweep_shift(s).at(0.0);
  const auto set = uniform_lattice(7.0, 7, -0.8, 0.0);
  const std::size_t bound = bound_state_count(set);
  REQUIRE(bound > 0);
  CHECK(rows.front().state_index == bound + 1);
  CHECK(count_states_below(set, rows.front().energy * (1.0 + 1e-9)) == bound + 1);
}

TEST_CASE("parameters outside their range are rejected") {
  auto s = small_shift();
  s.deltas = ParamGrid::of({0.0, 1.5});
  CHECK_THROWS_AS(sweep_shift(s), Error);
  auto f = small_flux();
  f.phis = ParamGrid::of({-0.1});
  CHECK_THROWS_AS(sweep_flux(f), Error);
  f.phis = ParamGrid::of({4.5});
  CHECK_THROWS_AS(sweep_flux(f), Error);
  try {
    s.deltas = ParamGrid::of({1.5});
    sweep_shift(s);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidArgument);
    CHECK(std::string(e.what()).find("delta = 1.5") != std::string::npos);
  }
}

TEST_CASE("results do not depend on the worker count") {
  const auto s = small_shift();
  SolverOptions one;
  one.workers = 1;
  SolverOptions many;
  many.workers = 4;
  const auto a = sweep_shift(s, one);
  const auto b = sweep_shift(s, many);
  CHECK(a.rows == b.rows);
  CHECK(a.provenance == b.provenance);
  std::ostringstream ca, cb;
  write_csv(a, ca);
  write_csv(b, cb);
  CHECK(ca.str() == cb.str());
}

TEST_CASE("tables round trip through CSV and JSON") {
  const auto table = sweep_flux(small_flux());
  std::ostringstream csv, json;
  write_csv(table, csv);
  write_json(table, json);
  CHECK(csv.str().rfind("# provenance: {", 0) == 0);
  for (const auto& text : {csv.str(), json.str()}) {
    std::istringstream in(text);
    const auto back = read_table(in);
    CHECK(back.param == "phi");
    CHECK(back.rows == table.rows);
    CHECK(back.provenance == table.provenance);
  }
  const auto config = flux_sweep_from_json(table.provenance.at("sweep"));
  const auto again = sweep_flux(config, solver_options_from_json(table.provenance.at("solver")));
  CHECK(again.rows == table.rows);
}

TEST_CASE("sweep configurations round trip") {
  const auto s = small_shift();
  const auto back = shift_sweep_from_json(to_json(s));
  CHECK(to_json(back) == to_json(s));
  const auto f = small_flux();
  CHECK(to_json(flux_sweep_from_json(to_json(f))) == to_json(f));
  CHECK_THROWS_AS(shift_sweep_from_json({{"L", 7.0}}), Error);
}

TEST_CASE("malformed tables are rejected") {
  std::istringstream bad_header("a,b,c\n");
  CHECK_THROWS_AS(read_table(bad_header), Error);
  std::istringstream bad_number("param,param_value,state_index,k,energy,edge_weight\nphi,x,1,2,3,4\n");
  CHECK_THROWS_AS(read_table(bad_number), Error);
}

#include "kp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>


#include "kp/errors.hpp"
#include "kp/io.hpp"

namespace kp {

namespace {

std::string describe(double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

}  // namespace

ScattererSet::ScattererSet(double length, std::vector<double> positions,
                           std::vector<double> heights)
    : length_(length), positions_(std::move(positions)), heights_(std::move(heights)) {
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw Error(Errc::NonPositiveLength, "box length must be positive, got " + describe(length_));
  }
  if (positions_.size() != heights_.size()) {
    throw Error(Errc::InvalidArgument, "positions and heights differ in length");
  }
  const double half = 0.5 * length_;
  for (std::size_t n = 0; n < positions_.size(); ++n) {
    const double y = positions_[n];
    if (!std::isfinite(y) || y < -half || y > half) {
      throw Error(Errc::PositionOutOfBox,
                  "scatterer " + std::to_string(n + 1) + " at " + describe(y) + " outside box");
    }
    if (!std::isfinite(heights_[n])) {
      throw Error(Errc::InvalidArgument, "height " + std::to_string(n + 1) + " is not finite");
    }
    if (n > 0 && !(positions_[n - 1] < y)) {
      throw Error(Errc::NonMonotonePositions,
                  "positions must be strictly increasing at index " + std::to_string(n + 1));
    }
  }
}

Region ScattererSet::region(std::size_t index) const {
  if (index > positions_.size()) {
    throw Error(Errc::InvalidArgument, "region index out of range");
  }
  const double left = index == 0 ? left_wall() : positions_[index - 1];
  const double right = index == positions_.size() ? right_wall() : positions_[index];
  return {index, left, right};
}

std::size_t ScattererSet::region_of(double x) const {
  // first scatterer with y >= x
  auto it = std::lower_bound(positions_.begin(), positions_.end(), x);
  return static_cast<std::size_t>(it - positions_.begin());
}

ScattererSet make_scatterer_set(double length, std::vector<double> positions,
                                std::vector<double> heights) {
  return ScattererSet(length, std::move(positions), std::move(heights));
}

std::vector<double> uniform_positions(double length, std::size_t count, double shift) {
  if (count == 0) {
    throw Error(Errc::InvalidArgument, "uniform lattice needs at least one scatterer");
  }
  if (!(shift >= -1.0 && shift <= 1.0)) {
    throw Error(Errc::InvalidArgument, "shift must lie in [-1, 1], got " + describe(shift));
  }
  const double half = 0.5 * length;
  const double spacing = length / static_cast<double>(count);
  std::vector<double> y(count);
  for (std::size_t n = 1; n <= count; ++n) {
    const double value = -half + (static_cast<double>(n) + 0.5 * (shift - 1.0)) * spacing;
    // rounding only; the exact value is inside the closed box
    y[n - 1] = std::clamp(value, -half, half);
  }
  return y;
}

ScattererSet uniform_lattice(double length, std::size_t count, double height, double shift) {
  return ScattererSet(length, uniform_positions(length, count, shift),
                      std::vector<double>(count, height));
}

ScattererSet uniform_lattice(double length, std::vector<double> heights, double shift) {
  auto y = uniform_positions(length, heights.size(), shift);
  return ScattererSet(length, std::move(y), std::move(heights));
}

std::vector<double> modulated_heights(std::size_t count, double h_min, double h_max,
                                      double flux) {
  const double a = 1.0 / static_cast<double>(count + 1);
  std::vector<double> h(count);
  for (std::size_t n = 1; n <= count; ++n) {
    const double c = std::cos(2.0 * std::numbers::pi * flux * (a * static_cast<double>(n) + 0.5));
    h[n - 1] = h_min + (h_max - h_min) * c * c;
  }
  return h;
}

ScattererSet modulated_lattice(double length, std::size_t count, double h_min, double h_max,
                               double flux) {
  if (count == 0) {
    throw Error(Errc::InvalidArgument, "modulated lattice needs at least one scatterer");
  }
  const double a = 1.0 / static_cast<double>(count + 1);
  std::vector<double> y(count);
  for (std::size_t n = 1; n <= count; ++n) {
    y[n - 1] = -0.5 * length + a * static_cast<double>(n) * length;
  }
  return ScattererSet(length, std::move(y), modulated_heights(count, h_min, h_max, flux));
}

double flux_period(std::size_t count) { return 0.5 * static_cast<double>(count + 1); }

std::vector<double> alternating_heights(std::size_t count, double first, double second) {
  std::vector<double> h(count);
  for (std::size_t n = 0; n < count; ++n) h[n] = (n % 2 == 0) ? first : second;
  return h;
}

std::vector<double> random_heights(std::size_t count, double h_min, double h_max,
                                   std::uint64_t seed) {
  if (!(h_min <= h_max)) {
    throw Error(Errc::InvalidArgument, "random heights need h_min <= h_max");
  }
  std::mt19937_64 engine(seed);
  std::vector<double> h(count);
  for (auto& value : h) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    value = std::min(h_max, h_min + (h_max - h_min) * u);
  }
  return h;
}


ScattererSet instance_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw Error(Errc::ConfigError, "instance must be a JSON object");
  if (spec.contains("scatterers")) {
    const double length = json_number(spec, "L");
    const auto& list = spec.at("scatterers");
    if (!list.is_array()) throw Error(Errc::ConfigError, "\"scatterers\" must be an array");
    std::vector<double> y, h;
    for (const auto& item : list) {
      y.push_back(json_number(item, "y"));
      h.push_back(json_number(item, "h"));
    }
    return ScattererSet(length, std::move(y), std::move(h));
  }
  if (spec.contains("box")) {
    return ScattererSet(json_number(spec.at("box"), "L"), {}, {});
  }
  if (spec.contains("uniform")) {
    const auto& u = spec.at("uniform");
    return uniform_lattice(json_number(u, "L"), json_count(u, "M"), json_number(u, "h"),
                           json_number_or(u, "delta", 0.0));
  }
  if (spec.contains("alternating")) {
    const auto& u = spec.at("alternating");
    return uniform_lattice(json_number(u, "L"),
                           alternating_heights(json_count(u, "M"), json_number(u, "h1"), json_number(u, "h2")),
                           json_number_or(u, "delta", 0.0));
  }
  if (spec.contains("modulated")) {
    const auto& u = spec.at("modulated");
    return modulated_lattice(json_number(u, "L"), json_count(u, "M"), json_number(u, "h_min"),
                             json_number(u, "h_max"), json_number_or(u, "phi", 0.0));
  }
  if (spec.contains("random")) {
    const auto& u = spec.at("random");
    const auto m = json_count(u, "M");
    const double length = json_number_or(u, "L", static_cast<double>(m));
    return uniform_lattice(length,
                           random_heights(m, json_number(u, "h_min"), json_number(u, "h_max"),
                                          json_seed(u, "seed")),
                           json_number_or(u, "delta", 0.0));
  }
  throw Error(Errc::ConfigError, "unrecognised instance specification");
}

nlohmann::json to_json(const ScattererSet& set) {
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t n = 0; n < set.size(); ++n) {
    list.push_back({{"y", set.positions()[n]}, {"h", set.heights()[n]}});
  }
  return {{"L", set.length()}, {"scatterers", list}};
}

}  // namespace kp

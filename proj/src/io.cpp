#include "kp/io.hpp"

#include <array>
#include <charconv>

#include "kp/errors.hpp"

#ifndef KP_VERSION
#define KP_VERSION "0.0.0"
#endif

namespace kp {

std::string_view version() noexcept { return KP_VERSION; }

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

double json_number(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number()) {
    throw Error(Errc::ConfigError, std::string("missing numeric field \"") + key + "\"");
  }
  return obj.at(key).get<double>();
}

double json_number_or(const nlohmann::json& obj, const char* key, double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) {
    throw Error(Errc::ConfigError, std::string("field \"") + key + "\" must be a number");
  }
  return obj.at(key).get<double>();
}

std::size_t json_count(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number_integer() ||
      obj.at(key).get<long long>() < 0) {
    throw Error(Errc::ConfigError, std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return obj.at(key).get<std::size_t>();
}

std::uint64_t json_seed(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number_unsigned()) {
    throw Error(Errc::ConfigError, std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return obj.at(key).get<std::uint64_t>();
}

nlohmann::json to_json(const SolverOptions& o) {
  return {{"k_min", o.k_min},           {"q_factor", o.q_factor}, {"tol_rel", o.tol_rel},
          {"tol_sep", o.tol_sep},       {"tangent_floor", o.tangent_floor},
          {"max_iter", o.max_iter}};
}

SolverOptions solver_options_from_json(const nlohmann::json& obj) {
  SolverOptions o;
  if (obj.is_null()) return o;
  if (!obj.is_object()) throw Error(Errc::ConfigError, "solver options must be an object");
  o.k_min = json_number_or(obj, "k_min", o.k_min);
  o.q_factor = json_number_or(obj, "q_factor", o.q_factor);
  o.tol_rel = json_number_or(obj, "tol_rel", o.tol_rel);
  o.tol_sep = json_number_or(obj, "tol_sep", o.tol_sep);
  o.tangent_floor = json_number_or(obj, "tangent_floor", o.tangent_floor);
  if (obj.contains("max_iter")) o.max_iter = static_cast<int>(json_count(obj, "max_iter"));
  if (!(o.k_min > 0.0) || !(o.q_factor > 0.0) || !(o.tol_rel > 0.0) || o.max_iter < 1) {
    throw Error(Errc::ConfigError, "solver options out of range");
  }
  return o;
}

}  // namespace kp

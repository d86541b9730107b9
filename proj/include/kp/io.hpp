#pragma once

// Shared serialization helpers: float formatting, JSON field access with
// ConfigError reporting, and solver options as JSON.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "kp/eigensolve.hpp"

namespace kp {

std::string_view version() noexcept;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

double json_number(const nlohmann::json& obj, const char* key);
double json_number_or(const nlohmann::json& obj, const char* key, double fallback);
/// Non-negative integer field.
std::size_t json_count(const nlohmann::json& obj, const char* key);
std::uint64_t json_seed(const nlohmann::json& obj, const char* key);

/// Worker count is deliberately left out: it never changes results.
nlohmann::json to_json(const SolverOptions& options);
/// Missing keys keep their defaults.
SolverOptions solver_options_from_json(const nlohmann::json& obj);

}  // namespace kp

#ifndef LEVYSPEC_CLI_CONFIG_IO_HPP
#define LEVYSPEC_CLI_CONFIG_IO_HPP

#include <json.hpp>
#include <string>
#include <string_view>

#include "levyspec/propagator.hpp"

namespace levyspec::cli {

/// Strict parse: unknown keys and wrongly typed fields are config errors whose
/// message names the field (and the line, for JSON syntax errors).
SolverConfig config_from_json(const nlohmann::json& doc);
SolverConfig parse_config(std::string_view text);
SolverConfig load_config(const std::string& path);

nlohmann::json config_to_json(const SolverConfig& config);

/// Applies one sweep parameter ("mass", "V0" or "a") to a copy of the config.
SolverConfig with_parameter(const SolverConfig& base, std::string_view param, double value);

}  // namespace levyspec::cli

#endif  // LEVYSPEC_CLI_CONFIG_IO_HPP

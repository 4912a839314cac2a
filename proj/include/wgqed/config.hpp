// config.hpp — run configuration files (JSON, strict schema)
//
// Every key is checked: unknown keys, wrong types and out-of-range values are
// reported with their dotted path (e.g. "pulse.delta") before any computation
// starts. Units: Gamma_ref = 1, v_g = 1; spacings in units of lambda_a.

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "wgqed/sweep.hpp"

namespace wgqed {

enum class OverwritePolicy { fail, overwrite, verify };

struct RunConfig {
    std::string name = "run";
    Scenario scenario;
    std::optional<SweepSpec> sweep;
    std::string output_dir = "out";
    OverwritePolicy overwrite = OverwritePolicy::fail;
    int workers = 1;
    nlohmann::json source; // the document as read, echoed into the manifest
};

// Parses and validates; throws ConfigError (or FormatError for spectrum files).
RunConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
// Parses text, reporting JSON syntax errors with line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);

const char* policy_name(OverwritePolicy p);

} // namespace wgqed

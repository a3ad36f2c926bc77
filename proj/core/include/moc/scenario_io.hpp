#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "moc/dynamics.hpp"

namespace moc {

/// Parses a YAML scenario document and validates it. Unknown keys, wrong
/// types and invariant violations throw Error with a "source:line:" prefix;
/// syntax and type problems use ErrorCode::Parse, semantic ones keep the
/// code reported by validation.
Scenario parse_scenario(std::string_view document, std::string_view source = "<scenario>");

/// Reads and parses a scenario file. Unreadable files throw ErrorCode::Io.
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical YAML text; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace moc

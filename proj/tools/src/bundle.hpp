#pragma once

#include <string_view>
#include <vector>

#include "moc/dynamics.hpp"

namespace moc::cli {

struct BundledScenario {
  std::string_view id;
  std::string_view yaml;
};

/// Scenario documents shipped for figures 7a-15h, sorted by id.
const std::vector<BundledScenario>& bundled_scenarios();

/// Throws Error(Usage) for an unknown id.
const BundledScenario& find_bundled(std::string_view id);

Scenario load_bundled(std::string_view id);

}  // namespace moc::cli

#include "bundle.hpp"

#include <string>

#include "moc/errors.hpp"
#include "moc/scenario_io.hpp"

namespace moc::cli {

const BundledScenario& find_bundled(std::string_view id) {
  for (const auto& b : bundled_scenarios()) {
    if (b.id == id) return b;
  }
  throw Error(ErrorCode::Usage, "unknown figure id '" + std::string(id) + "'");
}

Scenario load_bundled(std::string_view id) {
  const auto& b = find_bundled(id);
  return parse_scenario(b.yaml, std::string(b.id) + ".yaml");
}

}  // namespace moc::cli

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "moc/dynamics.hpp"

namespace moc {

/// SVG with obstacle outlines (Γ = 1 sampled parametrically) and trajectory
/// polylines. 2-D draws one panel; 3-D draws the ξ1-ξ2, ξ1-ξ3 and ξ2-ξ3
/// projections side by side.
std::string render_plot(std::span<const Trajectory> trajs, std::span<const ObstacleSpec> obstacles,
                        int dim, const std::optional<Vec>& goal = std::nullopt,
                        const std::string& title = {});

void emit_plot(std::span<const Trajectory> trajs, std::span<const ObstacleSpec> obstacles, int dim,
               const std::filesystem::path& path, const std::optional<Vec>& goal = std::nullopt,
               const std::string& title = {});

}  // namespace moc

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "moc/dynamics.hpp"

namespace moc {

/// step,t,xi1..,v1..,min_gamma,gamma_1..gamma_m,theta_1..theta_m[,phi_1..phi_m],status
/// theta_j is the rotation about e3 (the planar angle), phi_j the rotation
/// about e2 (3-D only). Obstacle columns are 1-based.
std::vector<std::string> trajectory_header(int dim, std::size_t obstacles);

/// Rows carry "running" in the status column except the last, which carries
/// the final status. Numbers use 17 significant digits.
void write_trajectory(std::ostream& out, const Trajectory& traj, int dim, std::size_t obstacles);
void write_trajectory(const Trajectory& traj, int dim, std::size_t obstacles,
                      const std::filesystem::path& path);

/// Reads back what write_trajectory produced. Only the serialized fields of
/// each record are populated (Γ and θ per obstacle, no weights).
Trajectory read_trajectory(std::istream& in, const std::string& source = "<csv>");
Trajectory read_trajectory(const std::filesystem::path& path);

std::string format_number(double x);

}  // namespace moc

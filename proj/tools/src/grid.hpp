#pragma once

#include <string_view>
#include <vector>

#include "moc/types.hpp"

namespace moc::cli {

/// "lo:hi:n" per axis, axes separated by commas, e.g. "-18:-18:1,-10:10:21".
/// Points are ordered with the last axis varying fastest.
std::vector<Vec> parse_grid(std::string_view spec, int dim);

}  // namespace moc::cli

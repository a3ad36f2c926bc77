#pragma once

#include <optional>

#include "moc/types.hpp"

namespace moc {

/// Default half-width of the band |Γ - 1| treated as the obstacle surface.
inline constexpr double kBoundaryTol = 1e-9;

/// How the side-selecting indicator Y (±1) is chosen for an obstacle.
///   Fixed:            always `y`.
///   GoalLine:         -1 when the state lies on the far side of the line
///                     through the goal and the obstacle center, +1 otherwise.
///   SignOfComponent:  -1 when (ξ - center)[axis] > 0, +1 when < 0;
///                     `flip` inverts the rule.
/// Ties (state exactly on the dividing line) resolve to +1.
enum class IndicatorRule { Fixed, GoalLine, SignOfComponent };

struct IndicatorPolicy {
  IndicatorRule rule = IndicatorRule::Fixed;
  int y = 1;          // Fixed only
  int axis = 1;       // SignOfComponent only, zero-based
  bool flip = false;  // SignOfComponent only

  friend bool operator==(const IndicatorPolicy&, const IndicatorPolicy&) = default;
};

/// Convex superellipsoid Γ(ξ) = Σ_i (ξ_i - c_i)^{2 p_i} / a_i.
struct ObstacleSpec {
  Vec center;
  Vec axis_scales;  // a_i > 0
  IVec exponents;   // p_i >= 1
  std::optional<int> group_id;
  IndicatorPolicy indicator;

  int dim() const { return static_cast<int>(center.size()); }

  friend bool operator==(const ObstacleSpec& a, const ObstacleSpec& b) {
    return same_values(a.center, b.center) && same_values(a.axis_scales, b.axis_scales) &&
           same_values(a.exponents, b.exponents) && a.group_id == b.group_id &&
           a.indicator == b.indicator;
  }
};

/// Builds an obstacle from per-axis radii r_i, i.e. a_i = r_i^{2 p_i}, so that
/// Γ = Σ ((ξ_i - c_i) / r_i)^{2 p_i}.
ObstacleSpec obstacle_from_radii(const Vec& center, const Vec& radii, const IVec& exponents);

/// Throws Error(Usage) on dimension mismatch or d ∉ {2,3}, Error(Domain) on
/// non-positive scales/exponents or non-finite values.
void validate(const ObstacleSpec& obs);

struct GammaEval {
  double value = 0.0;
  Vec gradient;
  double gradient_norm = 0.0;
};

GammaEval gamma_eval(const ObstacleSpec& obs, const Vec& point);

enum class Region { Inside, Boundary, Outside };

Region region_classify(const GammaEval& g, double boundary_tol = kBoundaryTol);

const char* to_string(Region r) noexcept;

}  // namespace moc

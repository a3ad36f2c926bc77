#pragma once

#include <utility>

#include "moc/geometry.hpp"
#include "moc/types.hpp"

namespace moc {

/// Gradients with norm at or below this are treated as degenerate (only the
/// obstacle center produces them).
inline constexpr double kGradientEps = 1e-12;

/// Orthonormal frame [e1 … ed] stored column-wise; e1 is the outward normal.
struct BasisMatrix {
  Mat columns;

  int dim() const { return static_cast<int>(columns.cols()); }
  Vec normal() const { return columns.col(0); }
  /// max |EᵀE - I|
  double orthogonality_error() const;
};

/// Which gradient pair seeds the 3-D pre-step frame.
///   XY: components (ξ1, ξ2), third axis ξ3
///   XZ: components (ξ1, ξ3), third axis ξ2
///   YZ: components (ξ2, ξ3), third axis ξ1
enum class CoordinateVariant { XY, XZ, YZ };

inline constexpr CoordinateVariant kAllVariants[] = {CoordinateVariant::XY, CoordinateVariant::XZ,
                                                     CoordinateVariant::YZ};

const char* to_string(CoordinateVariant v) noexcept;

struct RotationSchedule {
  double delta1 = 0.5;  // (0, 1]
  double delta2 = 2.0;  // [1, ∞)

  friend bool operator==(const RotationSchedule&, const RotationSchedule&) = default;
};

/// Rotation planes used in 3-D. In 2-D only `about_e3` applies (the plane of
/// e1 and e2).
enum class RotationPlanes { AboutE3, AboutE2, Both };

const char* to_string(RotationPlanes p) noexcept;

struct RotationConfig {
  RotationSchedule about_e3;
  RotationSchedule about_e2;
  RotationPlanes planes = RotationPlanes::Both;

  friend bool operator==(const RotationConfig&, const RotationConfig&) = default;
};

/// e1 = ∇Γ/‖∇Γ‖, e2 = (g2, -g1)/‖∇Γ‖. Throws DegenerateGradient.
BasisMatrix basis_2d(const GammaEval& g);

/// The rotation-free seed frame whose first column is the normalized
/// projection of ∇Γ onto the variant's coordinate plane. Throws
/// DegenerateVariant when both in-plane components are within kGradientEps of 0.
BasisMatrix prestep_basis_3d(const GammaEval& g, CoordinateVariant variant);

/// Closed-form 3-D frame: the pre-step frame tilted out of its plane until the
/// first column equals ∇Γ/‖∇Γ‖. The in-plane tangent column is unchanged.
BasisMatrix basis_3d(const GammaEval& g, CoordinateVariant variant);

/// Same frame built as an explicit product of three axis rotations applied to
/// the pre-step frame: align with the variant's first axis, tilt about the
/// second, rotate back. Kept as an independent route for cross-checking.
BasisMatrix basis_3d_by_rotations(const GammaEval& g, CoordinateVariant variant);

/// Tries `preferred`, then XY → XZ → YZ. Returns the frame and the variant used.
std::pair<BasisMatrix, CoordinateVariant> basis_3d_with_fallback(const GammaEval& g,
                                                                 CoordinateVariant preferred);

/// basis_2d or basis_3d_with_fallback by dimension.
BasisMatrix normal_basis(const GammaEval& g, CoordinateVariant preferred = CoordinateVariant::XY);

/// Angle in [0, π] between f and e1, from a clamped arccos.
double angle_between(const Vec& f, const Vec& e1);

/// θ = y · δ1 · angle · (1 - Γ^{-1/δ2}); zero on the boundary, |θ| ≤ δ1·π.
double rotation_angle(double angle_to_normal, double gamma_value, const RotationSchedule& sched,
                      int y);

/// Anticlockwise planar rotation [[c, -s], [s, c]].
Mat planar_rotation(double theta);

BasisMatrix rotate_basis_2d(const BasisMatrix& E, double theta);

/// Right-handed rotation by theta about a unit axis (Rodrigues). With the
/// axis (0, 0, 1) the upper-left block equals planar_rotation(theta).
/// Throws NonUnitAxis when |‖axis‖ - 1| > 1e-10.
Mat axis_angle_rotation(const Vec& axis, double theta);

struct ManipulatedBasis {
  BasisMatrix basis;
  double angle_to_normal = 0.0;  // θ between f and the unrotated e1
  double theta_e3 = 0.0;         // rotation about e3 (the e1-e2 plane); the 2-D angle
  double theta_e2 = 0.0;         // rotation about e2 (the e1-e3 plane); 3-D only
};

/// Rotates the frame so a field anti-parallel to the normal no longer
/// stagnates. In 3-D the rotations are taken about the columns of the input
/// frame; with Both the e3 rotation is applied first. Throws ZeroField when
/// ‖f‖ = 0.
ManipulatedBasis manipulate_basis(const BasisMatrix& E, const Vec& f, const GammaEval& g,
                                  const RotationConfig& config, int y);

}  // namespace moc

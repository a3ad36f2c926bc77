#include "moc/basis.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

#include "moc/errors.hpp"

namespace moc {
namespace {

// Index roles for a variant: the gradient pair (a, b) and the remaining axis c.
struct Axes {
  int a;
  int b;
  int c;
};

Axes axes_of(CoordinateVariant v) {
  switch (v) {
    case CoordinateVariant::XY: return {0, 1, 2};
    case CoordinateVariant::XZ: return {0, 2, 1};
    case CoordinateVariant::YZ: return {1, 2, 0};
  }
  return {0, 1, 2};
}

void require_3d(const GammaEval& g) {
  if (g.gradient.size() != 3) throw Error(ErrorCode::Usage, "3-D basis needs a 3-D gradient");
}

void require_nondegenerate(const GammaEval& g) {
  if (!(g.gradient_norm > kGradientEps)) {
    throw Error(ErrorCode::DegenerateGradient, "gradient norm " + std::to_string(g.gradient_norm));
  }
}

// Returns the in-plane norm of the variant's gradient pair, throwing when
// both components vanish.
double plane_norm(const GammaEval& g, const Axes& ax, CoordinateVariant v) {
  const double ga = g.gradient[ax.a];
  const double gb = g.gradient[ax.b];
  if (std::abs(ga) <= kGradientEps && std::abs(gb) <= kGradientEps) {
    throw Error(ErrorCode::DegenerateVariant,
                std::string("gradient components of variant ") + to_string(v) + " vanish");
  }
  return std::hypot(ga, gb);
}

}  // namespace

double BasisMatrix::orthogonality_error() const {
  const auto d = columns.cols();
  return (columns.transpose() * columns - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
}

const char* to_string(CoordinateVariant v) noexcept {
  switch (v) {
    case CoordinateVariant::XY: return "xy";
    case CoordinateVariant::XZ: return "xz";
    case CoordinateVariant::YZ: return "yz";
  }
  return "?";
}

const char* to_string(RotationPlanes p) noexcept {
  switch (p) {
    case RotationPlanes::AboutE3: return "e3";
    case RotationPlanes::AboutE2: return "e2";
    case RotationPlanes::Both: return "both";
  }
  return "?";
}

BasisMatrix basis_2d(const GammaEval& g) {
  if (g.gradient.size() != 2) throw Error(ErrorCode::Usage, "2-D basis needs a 2-D gradient");
  require_nondegenerate(g);
  const double n = g.gradient.norm();
  const double g1 = g.gradient[0] / n;
  const double g2 = g.gradient[1] / n;
  Mat E(2, 2);
  E << g1, g2,
       g2, -g1;
  return {E};
}

BasisMatrix prestep_basis_3d(const GammaEval& g, CoordinateVariant variant) {
  require_3d(g);
  const Axes ax = axes_of(variant);
  const double n = plane_norm(g, ax, variant);
  const double ga = g.gradient[ax.a] / n;
  const double gb = g.gradient[ax.b] / n;
  Mat P = Mat::Zero(3, 3);
  P(ax.a, 0) = ga;
  P(ax.b, 0) = gb;
  P(ax.a, 1) = gb;
  P(ax.b, 1) = -ga;
  P(ax.c, 2) = 1.0;
  return {P};
}

BasisMatrix basis_3d(const GammaEval& g, CoordinateVariant variant) {
  require_3d(g);
  require_nondegenerate(g);
  const Axes ax = axes_of(variant);
  const double nab = plane_norm(g, ax, variant);
  const double n = g.gradient.norm();
  const double ga = g.gradient[ax.a];
  const double gb = g.gradient[ax.b];
  const double gc = g.gradient[ax.c];

  Mat E = Mat::Zero(3, 3);
  E.col(0) = g.gradient / n;
  E(ax.a, 1) = gb / nab;
  E(ax.b, 1) = -ga / nab;
  E(ax.a, 2) = -ga * gc / (nab * n);
  E(ax.b, 2) = -gb * gc / (nab * n);
  E(ax.c, 2) = nab / n;
  return {E};
}

BasisMatrix basis_3d_by_rotations(const GammaEval& g, CoordinateVariant variant) {
  require_3d(g);
  require_nondegenerate(g);
  const Axes ax = axes_of(variant);
  const double nab = plane_norm(g, ax, variant);
  const double n = g.gradient.norm();
  const double ca = g.gradient[ax.a] / nab;
  const double sa = g.gradient[ax.b] / nab;

  // Rotation about the c axis taking the in-plane normal onto the a axis.
  Mat align = Mat::Identity(3, 3);
  align(ax.a, ax.a) = ca;
  align(ax.a, ax.b) = sa;
  align(ax.b, ax.a) = -sa;
  align(ax.b, ax.b) = ca;

  // Rotation about the b axis lifting the a axis to the elevation of ∇Γ.
  const double ce = nab / n;
  const double se = g.gradient[ax.c] / n;
  Mat tilt = Mat::Identity(3, 3);
  tilt(ax.a, ax.a) = ce;
  tilt(ax.a, ax.c) = -se;
  tilt(ax.c, ax.a) = se;
  tilt(ax.c, ax.c) = ce;

  const BasisMatrix seed = prestep_basis_3d(g, variant);
  return {align.transpose() * tilt * align * seed.columns};
}

std::pair<BasisMatrix, CoordinateVariant> basis_3d_with_fallback(const GammaEval& g,
                                                                 CoordinateVariant preferred) {
  try {
    return {basis_3d(g, preferred), preferred};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateVariant) throw;
  }
  for (CoordinateVariant v : kAllVariants) {
    if (v == preferred) continue;
    try {
      return {basis_3d(g, v), v};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateVariant) throw;
    }
  }
  // Unreachable for a non-degenerate gradient: some pair has a nonzero entry.
  throw Error(ErrorCode::DegenerateGradient, "no coordinate variant applies");
}

BasisMatrix normal_basis(const GammaEval& g, CoordinateVariant preferred) {
  if (g.gradient.size() == 2) return basis_2d(g);
  return basis_3d_with_fallback(g, preferred).first;
}

double angle_between(const Vec& f, const Vec& e1) {
  const double c = f.dot(e1) / (f.norm() * e1.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double rotation_angle(double angle_to_normal, double gamma_value, const RotationSchedule& sched,
                      int y) {
  assert(gamma_value >= 1.0);
  assert(angle_to_normal >= 0.0 && angle_to_normal <= std::numbers::pi + 1e-12);
  const double reach = 1.0 - std::pow(gamma_value, -1.0 / sched.delta2);
  return y * sched.delta1 * angle_to_normal * reach;
}

Mat planar_rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat R(2, 2);
  R << c, -s,
       s, c;
  return R;
}

BasisMatrix rotate_basis_2d(const BasisMatrix& E, double theta) {
  return {planar_rotation(theta) * E.columns};
}

Mat axis_angle_rotation(const Vec& axis, double theta) {
  if (axis.size() != 3) throw Error(ErrorCode::Usage, "rotation axis must be 3-D");
  if (std::abs(axis.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::NonUnitAxis, "axis norm " + std::to_string(axis.norm()));
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double k = 1.0 - c;
  const double x = axis[0], y = axis[1], z = axis[2];
  Mat R(3, 3);
  R << x * x * k + c,     x * y * k - z * s, x * z * k + y * s,
       x * y * k + z * s, y * y * k + c,     y * z * k - x * s,
       x * z * k - y * s, y * z * k + x * s, z * z * k + c;
  return R;
}

ManipulatedBasis manipulate_basis(const BasisMatrix& E, const Vec& f, const GammaEval& g,
                                  const RotationConfig& config, int y) {
  if (!(f.norm() > 0.0)) throw Error(ErrorCode::ZeroField, "cannot orient against a zero field");
  ManipulatedBasis out;
  out.angle_to_normal = angle_between(f, E.normal());
  const double gamma = std::max(g.value, 1.0);

  if (E.dim() == 2) {
    out.theta_e3 = rotation_angle(out.angle_to_normal, gamma, config.about_e3, y);
    out.basis = rotate_basis_2d(E, out.theta_e3);
    return out;
  }

  Mat R = Mat::Identity(3, 3);
  if (config.planes != RotationPlanes::AboutE2) {
    out.theta_e3 = rotation_angle(out.angle_to_normal, gamma, config.about_e3, y);
    R = axis_angle_rotation(E.columns.col(2), out.theta_e3);
  }
  if (config.planes != RotationPlanes::AboutE3) {
    out.theta_e2 = rotation_angle(out.angle_to_normal, gamma, config.about_e2, y);
    R = axis_angle_rotation(E.columns.col(1), out.theta_e2) * R;
  }
  out.basis = {R * E.columns};
  return out;
}

}  // namespace moc

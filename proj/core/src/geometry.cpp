#include "moc/geometry.hpp"

#include <cmath>
#include <string>

#include "moc/errors.hpp"

namespace moc {
namespace {

// Exact for the small integer exponents used here; std::pow would route
// negative bases through log/exp.
double ipow(double x, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

}  // namespace

ObstacleSpec obstacle_from_radii(const Vec& center, const Vec& radii, const IVec& exponents) {
  if (radii.size() != center.size() || exponents.size() != center.size()) {
    throw Error(ErrorCode::Usage, "obstacle center, radii and exponents differ in dimension");
  }
  ObstacleSpec obs;
  obs.center = center;
  obs.exponents = exponents;
  obs.axis_scales.resize(center.size());
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    obs.axis_scales[i] = ipow(radii[i], 2 * exponents[i]);
  }
  validate(obs);
  return obs;
}

void validate(const ObstacleSpec& obs) {
  const auto d = obs.center.size();
  if (d != 2 && d != 3) {
    throw Error(ErrorCode::Usage, "obstacle dimension must be 2 or 3, got " + std::to_string(d));
  }
  if (obs.axis_scales.size() != d || obs.exponents.size() != d) {
    throw Error(ErrorCode::Usage, "obstacle center, axis scales and exponents differ in dimension");
  }
  if (!obs.center.allFinite()) throw Error(ErrorCode::Domain, "obstacle center must be finite");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(obs.axis_scales[i] > 0.0) || !std::isfinite(obs.axis_scales[i])) {
      throw Error(ErrorCode::Domain, "axis scale must be positive");
    }
    if (obs.exponents[i] < 1) throw Error(ErrorCode::Domain, "exponent must be a positive integer");
  }
  if (obs.indicator.rule == IndicatorRule::Fixed && obs.indicator.y != 1 && obs.indicator.y != -1) {
    throw Error(ErrorCode::Domain, "fixed indicator must be +1 or -1");
  }
  if (obs.indicator.rule == IndicatorRule::SignOfComponent &&
      (obs.indicator.axis < 0 || obs.indicator.axis >= d)) {
    throw Error(ErrorCode::Domain, "indicator component out of range");
  }
}

GammaEval gamma_eval(const ObstacleSpec& obs, const Vec& point) {
  const auto d = obs.center.size();
  if (point.size() != d) {
    throw Error(ErrorCode::Usage, "point has dimension " + std::to_string(point.size()) +
                                      ", obstacle has " + std::to_string(d));
  }
  if (!point.allFinite()) throw Error(ErrorCode::Domain, "query point is not finite");

  GammaEval g;
  g.gradient.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double u = point[i] - obs.center[i];
    const int p = obs.exponents[i];
    const double odd = ipow(u, 2 * p - 1);
    g.value += odd * u / obs.axis_scales[i];
    g.gradient[i] = 2.0 * p * odd / obs.axis_scales[i];
  }
  g.gradient_norm = g.gradient.norm();
  return g;
}

Region region_classify(const GammaEval& g, double boundary_tol) {
  if (!(boundary_tol > 0.0)) throw Error(ErrorCode::Usage, "boundary tolerance must be positive");
  if (std::abs(g.value - 1.0) <= boundary_tol) return Region::Boundary;
  return g.value < 1.0 ? Region::Inside : Region::Outside;
}

const char* to_string(Region r) noexcept {
  switch (r) {
    case Region::Inside: return "inside";
    case Region::Boundary: return "boundary";
    case Region::Outside: return "outside";
  }
  return "?";
}

}  // namespace moc

#pragma once

#include <Eigen/Dense>

namespace moc {

/// Workspaces are 2-D or 3-D; fixed upper bounds keep every vector and
/// matrix on the stack.
inline constexpr int kMaxDim = 3;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using IVec = Eigen::Matrix<int, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline bool same_values(const Vec& a, const Vec& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

inline bool same_values(const IVec& a, const IVec& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

}  // namespace moc

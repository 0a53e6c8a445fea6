#pragma once

#include "spags/camera.hpp"
#include "spags/gaussian.hpp"
#include "spags/types.hpp"

#include <cmath>
#include <optional>

namespace spags {

// Closed-form splat geometry shared by the rasterizer, planner and losses.
// Everything here is a pure function of its arguments; templated on scalar
// so tests can cross-check float against double.

template <typename S>
Mat3<S> quat_to_rotation(const Quat<S>& q) {
  return q.normalized().toRotationMatrix();
}

// World covariance of a splat: Sigma = R * diag(s)^2 * R^T.
template <typename S>
Mat3<S> build_covariance(const Quat<S>& rotation, const Vec3<S>& scales) {
  const Mat3<S> R = quat_to_rotation(rotation);
  return R * scales.cwiseProduct(scales).asDiagonal() * R.transpose();
}

// Index of the smallest scale; ties broken by lowest axis index.
template <typename S>
int shortest_axis(const Vec3<S>& scales) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (scales[i] < scales[k]) k = i;
  return k;
}

// Surface normal of a flattened splat: the rotated shortest axis, oriented
// against the viewing direction (dot(n, view_dir) <= 0).
template <typename S>
Vec3<S> planar_normal(const Quat<S>& rotation, const Vec3<S>& scales,
                      const Vec3<S>& view_dir) {
  const Mat3<S> R = quat_to_rotation(rotation);
  Vec3<S> n = R.col(shortest_axis(scales));
  if (n.dot(view_dir) > S(0)) n = -n;
  return n;
}

inline Vec3d planar_normal(const GaussianPrimitive& g, const Vec3d& view_dir) {
  return planar_normal<Scalar>(g.rotation, g.scales, view_dir);
}

// Screen-space footprint of a splat: 2D mean, 2x2 covariance (with an
// isotropic floor added to the diagonal) and the view-space depth.
struct ProjectedGaussian {
  Vec2d mean;
  Mat2d cov;       // floored, positive definite
  Scalar depth;    // camera-space z of the mean
  Vec3d p_cam;     // camera-space mean
  Mat3d cov_world; // cached Sigma
};

// Jacobian of the pinhole projection at camera-space point p.
inline Eigen::Matrix<Scalar, 2, 3> projection_jacobian(const Camera& cam, const Vec3d& p) {
  const Scalar iz = 1.0 / p.z();
  Eigen::Matrix<Scalar, 2, 3> J;
  J << cam.fx * iz, 0, -cam.fx * p.x() * iz * iz,
       0, cam.fy * iz, -cam.fy * p.y() * iz * iz;
  return J;
}

// EWA projection: cov2d = J * W * Sigma * W^T * J^T + floor * I.
// Returns nullopt when the mean lies at or in front of the near plane (cull).
std::optional<ProjectedGaussian> project_gaussian(const GaussianPrimitive& g,
                                                  const Camera& cam,
                                                  Scalar cov2d_floor = 0.3);

}  // namespace spags

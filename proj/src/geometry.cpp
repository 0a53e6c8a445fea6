#include "spags/geometry.hpp"

namespace spags {

std::optional<ProjectedGaussian> project_gaussian(const GaussianPrimitive& g,
                                                  const Camera& cam,
                                                  Scalar cov2d_floor) {
  const Vec3d p_cam = cam.to_camera(g.position);
  if (p_cam.z() <= cam.near_plane) return std::nullopt;

  ProjectedGaussian out;
  out.p_cam = p_cam;
  out.depth = p_cam.z();
  out.mean = cam.project(p_cam);
  out.cov_world = build_covariance<Scalar>(g.rotation, g.scales);

  const Eigen::Matrix<Scalar, 2, 3> T2 = projection_jacobian(cam, p_cam) * cam.R;
  out.cov = T2 * out.cov_world * T2.transpose();
  out.cov(0, 0) += cov2d_floor;
  out.cov(1, 1) += cov2d_floor;
  return out;
}

}  // namespace spags

#pragma once

#include "spags/types.hpp"

#include <string>
#include <vector>

namespace spags {

// Pinhole camera with world-to-camera pose: x_cam = R * x_world + t.
// The camera looks along +z of its own frame; depth means camera-space z.
struct Camera {
  int id = 0;
  int width = 0;
  int height = 0;
  Scalar fx = 0, fy = 0;
  Scalar cx = 0, cy = 0;
  Mat3d R = Mat3d::Identity();
  Vec3d t = Vec3d::Zero();
  Scalar near_plane = 0.01;
  Scalar far_plane = 100.0;

  Vec3d to_camera(const Vec3d& p_world) const { return R * p_world + t; }
  Vec3d to_world(const Vec3d& p_cam) const { return R.transpose() * (p_cam - t); }
  Vec3d center() const { return -R.transpose() * t; }

  // Camera-space direction of the ray through pixel center (x+0.5, y+0.5),
  // z-normalized so that (ray * depth).z == depth.
  Vec3d pixel_ray(Scalar px, Scalar py) const {
    return {(px - cx) / fx, (py - cy) / fy, 1.0};
  }

  // Projects a camera-space point; valid only for z > 0.
  Vec2d project(const Vec3d& p_cam) const {
    return {fx * p_cam.x() / p_cam.z() + cx, fy * p_cam.y() / p_cam.z() + cy};
  }

  Mat3d intrinsics() const {
    Mat3d K = Mat3d::Identity();
    K(0, 0) = fx;
    K(1, 1) = fy;
    K(0, 2) = cx;
    K(1, 2) = cy;
    return K;
  }

  // Camera scaled to a lower resolution (intrinsics follow).
  Camera scaled(Scalar factor) const;

  // Throws ValidationError if R is not orthonormal or near >= far.
  void validate() const;

  // Look-at constructor: camera at `eye` looking at `target`. `up` is a
  // hint; it is re-orthogonalized and may not survive exactly.
  static Camera look_at(const Vec3d& eye, const Vec3d& target, const Vec3d& up,
                        int width, int height, Scalar focal);
};

// JSON array of {id, width, height, fx, fy, cx, cy, R (row-major 9), t (3)}.
std::vector<Camera> load_cameras_json(const std::string& path);
void save_cameras_json(const std::string& path, const std::vector<Camera>& cams);

}  // namespace spags

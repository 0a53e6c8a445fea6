#pragma once

#include "spags/gaussian.hpp"

#include <string>
#include <vector>

namespace spags {

// Binary little-endian PLY with one vertex element. Properties per vertex:
//   x y z  rot_w rot_x rot_y rot_z  scale_x scale_y scale_z (log-space)
//   opacity (pre-sigmoid)  red green blue (float [0,1])  reliability
//   part_prob_0 .. part_prob_{q-1}
// plus an optional part_id (int) column when parts have been assigned.
void save_cloud_ply(const std::string& path, const GaussianCloud& cloud);
GaussianCloud load_cloud_ply(const std::string& path);

// Plain xyz point cloud (used by the registration CLI). Accepts any PLY
// whose vertex element starts with float x,y,z properties.
std::vector<Vec3d> load_points_ply(const std::string& path);
void save_points_ply(const std::string& path, const std::vector<Vec3d>& points);

}  // namespace spags

#pragma once

#include "spags/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace spags {

struct TriangleMesh {
  std::vector<Vec3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> vertex_parts;   // optional, parallel to vertices
  std::vector<Vec3d> vertex_colors;  // optional

  bool empty() const { return triangles.empty(); }
  Scalar area() const;
  // Drops triangles with area below the threshold and unused vertices.
  void remove_degenerate(Scalar min_area = 1e-12);
  void append(const TriangleMesh& other, int part_id = -1);
};

// Area-weighted random surface samples, reproducible under the seed.
std::vector<Vec3d> sample_mesh_surface(const TriangleMesh& mesh, int count,
                                       std::uint64_t seed);

// Wavefront OBJ; writes one `usemtl part_<k>` group per part id when
// vertex_parts is populated.
void save_mesh_obj(const std::string& path, const TriangleMesh& mesh);
// Binary little-endian PLY with optional per-vertex color and part id.
void save_mesh_ply(const std::string& path, const TriangleMesh& mesh);
TriangleMesh load_mesh_obj(const std::string& path);

}  // namespace spags

#pragma once

#include "spags/camera.hpp"
#include "spags/gaussian.hpp"
#include "spags/image.hpp"
#include "spags/mesh.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace spags {

enum class JointType { Revolute, Prismatic };

struct JointSpec {
  std::string name;
  int child_part = 1;
  JointType type = JointType::Revolute;
  Vec3d axis = Vec3d::UnitZ();
  Vec3d pivot = Vec3d::Zero();   // a point on the axis (revolute only)
  Vec2d range = {0.0, 1.0};      // radians or world units
};

// Everything needed to rebuild a scene deterministically; serialized as
// scene.json so every CLI stage can reconstruct the same oracle.
struct SceneSpec {
  std::string fixture = "hinge";  // hinge | drawer | sphere | plane | plane_pair
  std::uint64_t seed = 1;
  int resolution = 128;
  int n_candidates = 64;
  Scalar radius = 2.5;        // candidate hemisphere radius
  Scalar focal_factor = 1.7;  // focal = factor * resolution
  Scalar joint_state = 0.0;   // applied to every joint before rendering
  int color_supersample = 2;  // rays per pixel side for oracle color
};

SceneSpec load_scene_json(const std::string& path);
void save_scene_json(const std::string& path, const SceneSpec& spec);

// Exact per-pixel ground truth for a camera.
struct OracleRender {
  Image color;    // H x W x 3, shaded albedo
  Image depth;    // H x W, camera-space z, 0 on background
  Image normal;   // H x W x 3, camera frame, facing the viewer
  Image mask;     // H x W in {0,1}
  Image part_id;  // H x W, part index, -1 on background
};

struct SurfaceSample {
  Vec3d position;
  Vec3d normal;
  Vec3d color;
  int part = 0;
  // Optional anisotropic frame for silhouette-edge samples: when `tangent`
  // is non-zero the splat is stretched along it and tightened across.
  Vec3d tangent = Vec3d::Zero();
  Vec2d tangent_scales = Vec2d::Zero();  // (along, across) in world units
};

class SyntheticScene {
 public:
  struct Shape;  // analytic primitive (box / sphere / rect)

  static SyntheticScene build(const SceneSpec& spec);

  const SceneSpec& spec() const { return spec_; }
  int part_count() const;
  const std::vector<JointSpec>& joints() const { return joints_; }
  const std::vector<std::string>& part_names() const { return part_names_; }
  int parent_part(int part) const { return part_parents_[part]; }

  const std::vector<Camera>& candidates() const { return candidates_; }

  OracleRender render_oracle(const Camera& cam) const;
  Image render_color(const Camera& cam) const { return render_oracle(cam).color; }

  // Per-part binary masks matching render_oracle(cam).part_id.
  std::vector<Image> part_masks(const Camera& cam) const;

  // Analytic ground-truth meshes (triangulated fixture surfaces).
  TriangleMesh mesh(int part = -1) const;  // -1 = whole scene

  // Deterministic quasi-uniform surface samples at the given spacing.
  std::vector<SurfaceSample> sample_surface(Scalar spacing, std::uint64_t seed) const;

  Vec3d centroid() const { return centroid_; }
  Scalar extent() const { return extent_; }

  // Ray cast in world space; returns hit distance, or nullopt.
  struct Hit {
    Scalar t;
    Vec3d normal;  // world frame, oriented against the ray
    Vec3d color;
    int part;
  };
  std::optional<Hit> raycast(const Vec3d& origin, const Vec3d& dir) const;

 private:
  SceneSpec spec_;
  std::vector<std::shared_ptr<Shape>> shapes_;
  std::vector<std::string> part_names_;
  std::vector<int> part_parents_;
  std::vector<JointSpec> joints_;
  std::vector<Camera> candidates_;
  Vec3d centroid_ = Vec3d::Zero();
  Scalar extent_ = 1.0;
};

// Flattened, nearly opaque splats seeded on the oracle surface; the
// "converged cloud" stand-in used by tests and mask back-projection.
GaussianCloud cloud_from_surface(const std::vector<SurfaceSample>& samples,
                                 Scalar spacing, int part_count,
                                 Scalar opacity = 0.97);

}  // namespace spags

#pragma once

#include "spags/camera.hpp"
#include "spags/gaussian.hpp"
#include "spags/geometry.hpp"
#include "spags/image.hpp"

#include <memory>
#include <vector>

namespace spags {

struct RenderConfig {
  int tile_size = 16;
  Scalar alpha_min = 1.0 / 255.0;    // contributions below this are skipped
  Scalar alpha_clamp = 0.99;         // per-splat alpha ceiling
  Scalar transmittance_min = 1e-4;   // blending early-exit
  Scalar sigma_cutoff = 3.0;         // splat evaluated out to this many sigmas
  Scalar cov2d_floor = 0.3;          // px^2 added to the 2D covariance diagonal
  Vec3d background = Vec3d::Zero();
  int max_contributors = 64;         // per-pixel contributor list cap
  Scalar depth_alpha_min = 0.5;      // depth written only where alpha >= this
  int threads = 1;                   // tile workers; results identical for any count
};

// (primitive index, blend weight w = alpha_i * prod_{j<i}(1 - alpha_j)).
struct Contributor {
  int index;
  Scalar weight;
};

// Per-view per-splat quantities cached by the forward pass; the backward
// pass and the planner reuse them instead of re-projecting.
struct SplatRecord {
  int prim;          // index into the cloud
  Vec2d mean;        // pixel coordinates
  Mat2d cov_inv;     // inverse of the floored 2D covariance
  Scalar depth;      // camera-space z
  Vec3d p_cam;       // camera-space mean
  Vec3d n_cam;       // camera-frame planar normal
  Scalar plane_d;    // dot(n_cam, p_cam)
  Vec2d bbox_min, bbox_max;
};

struct ForwardCache {
  std::vector<SplatRecord> splats;            // visible splats only
  std::vector<std::vector<int>> tile_splats;  // per tile, depth-sorted records
  int tiles_x = 0, tiles_y = 0;
  std::size_t cloud_size = 0;
  RenderConfig config;
};

struct RenderBuffers {
  Image color;   // H x W x 3
  Image alpha;   // H x W
  Image depth;   // H x W, 0 where alpha < depth_alpha_min
  Image normal;  // H x W x 3, camera frame, zero where uncovered
  std::vector<std::vector<Contributor>> contributors;  // per pixel, front-to-back
  std::shared_ptr<const ForwardCache> cache;

  const std::vector<Contributor>& contributors_at(int x, int y) const {
    return contributors[std::size_t(y) * color.width + x];
  }
};

// Loss partials per primitive. Rotation gradients are ordered (w, x, y, z)
// and account for the forward pass normalizing the quaternion.
struct GradientSet {
  std::vector<Vec3d> d_position;
  std::vector<Vec4d> d_rotation;
  std::vector<Vec3d> d_scales;
  std::vector<Scalar> d_opacity;  // w.r.t. the activated (post-sigmoid) value
  std::vector<Vec3d> d_color;

  void resize(std::size_t n);
  void accumulate(const GradientSet& other, Scalar weight = 1.0);
  bool all_finite() const;
};

// Per-pixel upstream gradients; an empty image means zero gradient for
// that channel.
struct PixelGradients {
  Image d_color;
  Image d_alpha;
  Image d_depth;
  Image d_normal;
};

// Forward splatting. Color composites over `background`; depth is the
// ray intersection with the alpha-blended splat plane (n, d) per pixel;
// the normal buffer is the normalized blended camera-frame normal.
RenderBuffers render(const GaussianCloud& cloud, const Camera& cam,
                     const RenderConfig& config = {});

// Adjoint of render. Requires `buffers` produced by render() from the same
// cloud and camera (throws std::invalid_argument otherwise). Deterministic
// for any worker count: per-tile partials are reduced in tile order.
GradientSet render_backward(const GaussianCloud& cloud, const Camera& cam,
                            const RenderBuffers& buffers,
                            const PixelGradients& upstream);

}  // namespace spags

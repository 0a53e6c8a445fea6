#pragma once

#include "spags/camera.hpp"
#include "spags/gaussian.hpp"
#include "spags/render.hpp"
#include "spags/rng.hpp"

#include <random>

namespace spags::testutil {

inline Camera front_camera(int w = 32, int h = 32, Scalar focal = 40.0) {
  Camera cam;
  cam.width = w;
  cam.height = h;
  cam.fx = cam.fy = focal;
  cam.cx = w / 2.0;
  cam.cy = h / 2.0;
  cam.near_plane = 0.1;
  cam.far_plane = 50.0;
  return cam;
}

inline Quatd random_quat(std::mt19937_64& rng) {
  std::normal_distribution<Scalar> n(0.0, 1.0);
  return Quatd(n(rng), n(rng), n(rng), n(rng)).normalized();
}

// Random cloud in front of front_camera, within a +-1 box around z ~ 3.
inline GaussianCloud random_cloud(int n, std::uint64_t seed, Scalar min_scale = 0.05,
                                  Scalar max_scale = 0.45) {
  std::mt19937_64 rng = make_rng(seed, "testcloud");
  std::uniform_real_distribution<Scalar> pos(-1.0, 1.0);
  std::uniform_real_distribution<Scalar> z(2.2, 4.2);
  std::uniform_real_distribution<Scalar> sc(min_scale, max_scale);
  std::uniform_real_distribution<Scalar> op(0.3, 0.9);
  std::uniform_real_distribution<Scalar> col(0.05, 0.95);

  GaussianCloud cloud;
  for (int i = 0; i < n; ++i) {
    GaussianPrimitive g;
    g.position = Vec3d(pos(rng), pos(rng), z(rng));
    g.rotation = random_quat(rng);
    g.scales = Vec3d(sc(rng), sc(rng), sc(rng));
    g.opacity = op(rng);
    g.color = Vec3d(col(rng), col(rng), col(rng));
    cloud.primitives.push_back(g);
  }
  return cloud;
}

// Rendering config without evaluation cutoffs; used by finite-difference
// checks where the cutoffs would show up as jumps.
inline RenderConfig smooth_config(int threads = 1) {
  RenderConfig cfg;
  cfg.alpha_min = 1e-9;
  cfg.sigma_cutoff = 6.0;
  cfg.transmittance_min = 0.0;
  cfg.threads = threads;
  return cfg;
}

}  // namespace spags::testutil

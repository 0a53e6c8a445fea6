#include "spags/render.hpp"

#include "spags/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spags {

void GradientSet::resize(std::size_t n) {
  d_position.assign(n, Vec3d::Zero());
  d_rotation.assign(n, Vec4d::Zero());
  d_scales.assign(n, Vec3d::Zero());
  d_opacity.assign(n, 0.0);
  d_color.assign(n, Vec3d::Zero());
}

void GradientSet::accumulate(const GradientSet& other, Scalar weight) {
  for (std::size_t i = 0; i < d_position.size(); ++i) {
    d_position[i] += weight * other.d_position[i];
    d_rotation[i] += weight * other.d_rotation[i];
    d_scales[i] += weight * other.d_scales[i];
    d_opacity[i] += weight * other.d_opacity[i];
    d_color[i] += weight * other.d_color[i];
  }
}

bool GradientSet::all_finite() const {
  for (std::size_t i = 0; i < d_position.size(); ++i) {
    if (!d_position[i].allFinite() || !d_rotation[i].allFinite() ||
        !d_scales[i].allFinite() || !std::isfinite(d_opacity[i]) ||
        !d_color[i].allFinite())
      return false;
  }
  return true;
}

namespace {

std::shared_ptr<ForwardCache> build_cache(const GaussianCloud& cloud, const Camera& cam,
                                          const RenderConfig& config) {
  auto cache = std::make_shared<ForwardCache>();
  cache->config = config;
  cache->cloud_size = cloud.size();
  cache->tiles_x = (cam.width + config.tile_size - 1) / config.tile_size;
  cache->tiles_y = (cam.height + config.tile_size - 1) / config.tile_size;

  const Vec3d cam_center = cam.center();
  cache->splats.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& g = cloud.primitives[i];
    auto proj = project_gaussian(g, cam, config.cov2d_floor);
    if (!proj || proj->depth > cam.far_plane) continue;

    const Scalar det = proj->cov.determinant();
    if (!(det > 1e-12)) continue;

    SplatRecord rec;
    rec.prim = static_cast<int>(i);
    rec.mean = proj->mean;
    rec.cov_inv = proj->cov.inverse();
    rec.depth = proj->depth;
    rec.p_cam = proj->p_cam;

    Vec3d view_dir = g.position - cam_center;
    const Scalar vn = view_dir.norm();
    view_dir = vn > 1e-12 ? Vec3d(view_dir / vn) : Vec3d(0, 0, 1);
    rec.n_cam = cam.R * planar_normal(g, view_dir);
    rec.plane_d = rec.n_cam.dot(rec.p_cam);

    // Conservative screen bound: cutoff sigmas of the largest eigenvalue.
    const Scalar tr = proj->cov.trace();
    const Scalar root = std::sqrt(std::max<Scalar>(0.0, 0.25 * tr * tr - det));
    const Scalar lambda_max = 0.5 * tr + root;
    const Scalar radius = config.sigma_cutoff * std::sqrt(std::max<Scalar>(lambda_max, 0.0));
    rec.bbox_min = rec.mean - Vec2d(radius, radius);
    rec.bbox_max = rec.mean + Vec2d(radius, radius);
    if (rec.bbox_max.x() < 0 || rec.bbox_max.y() < 0 || rec.bbox_min.x() > cam.width ||
        rec.bbox_min.y() > cam.height)
      continue;
    cache->splats.push_back(rec);
  }

  cache->tile_splats.assign(std::size_t(cache->tiles_x) * cache->tiles_y, {});
  for (std::size_t s = 0; s < cache->splats.size(); ++s) {
    const auto& rec = cache->splats[s];
    const int tx0 = std::max(0, static_cast<int>(rec.bbox_min.x()) / config.tile_size);
    const int ty0 = std::max(0, static_cast<int>(rec.bbox_min.y()) / config.tile_size);
    const int tx1 = std::min(cache->tiles_x - 1,
                             static_cast<int>(rec.bbox_max.x()) / config.tile_size);
    const int ty1 = std::min(cache->tiles_y - 1,
                             static_cast<int>(rec.bbox_max.y()) / config.tile_size);
    for (int ty = ty0; ty <= ty1; ++ty)
      for (int tx = tx0; tx <= tx1; ++tx)
        cache->tile_splats[std::size_t(ty) * cache->tiles_x + tx].push_back(
            static_cast<int>(s));
  }

  // Depth sort per tile, stable tie-break on primitive index.
  for (auto& list : cache->tile_splats) {
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      const auto& ra = cache->splats[a];
      const auto& rb = cache->splats[b];
      if (ra.depth != rb.depth) return ra.depth < rb.depth;
      return ra.prim < rb.prim;
    });
  }
  return cache;
}

}  // namespace

RenderBuffers render(const GaussianCloud& cloud, const Camera& cam,
                     const RenderConfig& config) {
  cam.validate();
  RenderBuffers out;
  out.color = Image(cam.width, cam.height, 3);
  out.alpha = Image(cam.width, cam.height, 1);
  out.depth = Image(cam.width, cam.height, 1);
  out.normal = Image(cam.width, cam.height, 3);
  out.contributors.resize(std::size_t(cam.width) * cam.height);

  auto cache = build_cache(cloud, cam, config);
  out.cache = cache;

  const std::size_t n_tiles = cache->tile_splats.size();
  parallel_chunks(n_tiles, config.threads, [&](std::size_t t0, std::size_t t1) {
    for (std::size_t t = t0; t < t1; ++t) {
      const auto& list = cache->tile_splats[t];
      const int tx = static_cast<int>(t) % cache->tiles_x;
      const int ty = static_cast<int>(t) / cache->tiles_x;
      const int x0 = tx * config.tile_size;
      const int y0 = ty * config.tile_size;
      const int x1 = std::min(cam.width, x0 + config.tile_size);
      const int y1 = std::min(cam.height, y0 + config.tile_size);

      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const Vec2d pix(x + 0.5, y + 0.5);
          Scalar T = 1.0;
          Scalar alpha_acc = 0.0;
          Vec3d color_acc = Vec3d::Zero();
          Vec3d n_acc = Vec3d::Zero();
          Scalar d_num = 0.0;
          auto& contribs = out.contributors[std::size_t(y) * cam.width + x];

          for (const int s : list) {
            const auto& rec = cache->splats[s];
            if (pix.x() < rec.bbox_min.x() || pix.x() > rec.bbox_max.x() ||
                pix.y() < rec.bbox_min.y() || pix.y() > rec.bbox_max.y())
              continue;
            const Vec2d d = pix - rec.mean;
            const Scalar power = -0.5 * d.dot(rec.cov_inv * d);
            if (power < -0.5 * config.sigma_cutoff * config.sigma_cutoff) continue;
            const auto& g = cloud.primitives[rec.prim];
            const Scalar alpha =
                std::min(config.alpha_clamp, g.opacity * std::exp(power));
            if (alpha < config.alpha_min) continue;

            const Scalar w = alpha * T;
            color_acc += w * g.color;
            alpha_acc += w;
            n_acc += w * rec.n_cam;
            d_num += w * rec.plane_d;
            if (static_cast<int>(contribs.size()) < config.max_contributors)
              contribs.push_back({rec.prim, w});

            T *= (1.0 - alpha);
            if (T < config.transmittance_min) break;
          }

          color_acc += (1.0 - alpha_acc) * config.background;
          out.color.set_rgb(x, y, color_acc);
          out.alpha.at(x, y) = alpha_acc;

          const Scalar n_norm = n_acc.norm();
          if (n_norm > 1e-12) out.normal.set_rgb(x, y, n_acc / n_norm);

          if (alpha_acc >= config.depth_alpha_min) {
            const Scalar den = n_acc.dot(cam.pixel_ray(pix.x(), pix.y()));
            if (std::abs(den) > 1e-12) out.depth.at(x, y) = d_num / den;
          }
        }
      }
    }
  });

  return out;
}

}  // namespace spags

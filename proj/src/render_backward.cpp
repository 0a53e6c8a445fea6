#include "spags/render.hpp"

#include "spags/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spags {

namespace {

// Partials w.r.t. the per-view splat quantities, accumulated over pixels.
struct SplatPartial {
  Vec2d d_mean = Vec2d::Zero();
  Mat2d d_cov_inv = Mat2d::Zero();  // symmetric
  Scalar d_opacity = 0.0;
  Vec3d d_color = Vec3d::Zero();
  Vec3d d_ncam = Vec3d::Zero();
  Scalar d_plane_d = 0.0;

  void add(const SplatPartial& o) {
    d_mean += o.d_mean;
    d_cov_inv += o.d_cov_inv;
    d_opacity += o.d_opacity;
    d_color += o.d_color;
    d_ncam += o.d_ncam;
    d_plane_d += o.d_plane_d;
  }
};

// d(R)/d(q_c) for a unit quaternion q = (w,x,y,z).
std::array<Mat3d, 4> rotation_jacobian(const Quatd& q) {
  const Scalar w = q.w(), x = q.x(), y = q.y(), z = q.z();
  std::array<Mat3d, 4> J;
  J[0] << 0, -z, y, z, 0, -x, -y, x, 0;                    // d/dw
  J[1] << 0, y, z, y, -2 * x, -w, z, w, -2 * x;            // d/dx
  J[2] << -2 * y, x, w, x, 0, z, -w, z, -2 * y;            // d/dy
  J[3] << -2 * z, -w, x, w, -2 * z, y, x, y, 0;            // d/dz
  for (auto& m : J) m *= 2.0;
  return J;
}

struct PixelStep {
  int slot;  // index into the tile's splat list
  Scalar alpha;
  Scalar gauss;  // exp(power)
  Scalar weight;
  bool clamped;
};

}  // namespace

GradientSet render_backward(const GaussianCloud& cloud, const Camera& cam,
                            const RenderBuffers& buffers,
                            const PixelGradients& upstream) {
  if (!buffers.cache)
    throw std::invalid_argument("render_backward: forward cache missing");
  const ForwardCache& cache = *buffers.cache;
  if (cache.cloud_size != cloud.size() || buffers.color.width != cam.width ||
      buffers.color.height != cam.height)
    throw std::invalid_argument("render_backward: buffers do not match cloud/camera");

  const RenderConfig& config = cache.config;
  const bool has_color = upstream.d_color.size() > 0;
  const bool has_alpha = upstream.d_alpha.size() > 0;
  const bool has_depth = upstream.d_depth.size() > 0;
  const bool has_normal = upstream.d_normal.size() > 0;

  const std::size_t n_tiles = cache.tile_splats.size();
  std::vector<std::vector<SplatPartial>> tile_partials(n_tiles);

  parallel_chunks(n_tiles, config.threads, [&](std::size_t t0, std::size_t t1) {
    std::vector<PixelStep> steps;
    for (std::size_t t = t0; t < t1; ++t) {
      const auto& list = cache.tile_splats[t];
      if (list.empty()) continue;
      auto& partials = tile_partials[t];
      partials.assign(list.size(), {});

      const int tx = static_cast<int>(t) % cache.tiles_x;
      const int ty = static_cast<int>(t) / cache.tiles_x;
      const int x0 = tx * config.tile_size;
      const int y0 = ty * config.tile_size;
      const int x1 = std::min(cam.width, x0 + config.tile_size);
      const int y1 = std::min(cam.height, y0 + config.tile_size);

      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          Vec3d dC = Vec3d::Zero();
          if (has_color) dC = {upstream.d_color.at(x, y, 0), upstream.d_color.at(x, y, 1),
                               upstream.d_color.at(x, y, 2)};
          const Scalar dA_up = has_alpha ? upstream.d_alpha.at(x, y) : 0.0;
          const Scalar dD_up = has_depth ? upstream.d_depth.at(x, y) : 0.0;
          Vec3d dN_up = Vec3d::Zero();
          if (has_normal)
            dN_up = {upstream.d_normal.at(x, y, 0), upstream.d_normal.at(x, y, 1),
                     upstream.d_normal.at(x, y, 2)};
          if (dC.isZero() && dA_up == 0.0 && dD_up == 0.0 && dN_up.isZero()) continue;

          // Re-run the forward traversal for this pixel.
          const Vec2d pix(x + 0.5, y + 0.5);
          steps.clear();
          Scalar T = 1.0;
          Scalar alpha_acc = 0.0;
          Vec3d n_acc = Vec3d::Zero();
          Scalar d_num = 0.0;
          for (std::size_t li = 0; li < list.size(); ++li) {
            const auto& rec = cache.splats[list[li]];
            if (pix.x() < rec.bbox_min.x() || pix.x() > rec.bbox_max.x() ||
                pix.y() < rec.bbox_min.y() || pix.y() > rec.bbox_max.y())
              continue;
            const Vec2d d = pix - rec.mean;
            const Scalar power = -0.5 * d.dot(rec.cov_inv * d);
            if (power < -0.5 * config.sigma_cutoff * config.sigma_cutoff) continue;
            const auto& g = cloud.primitives[rec.prim];
            const Scalar gauss = std::exp(power);
            const Scalar raw = g.opacity * gauss;
            const bool clamped = raw > config.alpha_clamp;
            const Scalar alpha = clamped ? config.alpha_clamp : raw;
            if (alpha < config.alpha_min) continue;

            const Scalar w = alpha * T;
            alpha_acc += w;
            n_acc += w * rec.n_cam;
            d_num += w * rec.plane_d;
            steps.push_back({static_cast<int>(li), alpha, gauss, w, clamped});
            T *= (1.0 - alpha);
            if (T < config.transmittance_min) break;
          }
          if (steps.empty()) continue;

          const Scalar dA = dA_up - dC.dot(config.background);  // bg * (1 - alpha) term

          Vec3d d_nacc = Vec3d::Zero();
          if (!dN_up.isZero()) {
            const Scalar n_norm = n_acc.norm();
            if (n_norm > 1e-12) {
              const Vec3d n_out = n_acc / n_norm;
              d_nacc = (dN_up - n_out * n_out.dot(dN_up)) / n_norm;
            }
          }

          Scalar d_dnum = 0.0;
          if (dD_up != 0.0 && alpha_acc >= config.depth_alpha_min) {
            const Vec3d ray = cam.pixel_ray(pix.x(), pix.y());
            const Scalar den = n_acc.dot(ray);
            if (std::abs(den) > 1e-12) {
              d_dnum = dD_up / den;
              d_nacc += (-dD_up * d_num / (den * den)) * ray;
            }
          }

          // dL/dw per step, then the suffix recurrence for dL/dalpha.
          Scalar suffix = 0.0;  // sum over later steps of dL/dw_j * w_j
          for (int si = static_cast<int>(steps.size()) - 1; si >= 0; --si) {
            const auto& st = steps[si];
            const auto& rec = cache.splats[list[st.slot]];
            const auto& g = cloud.primitives[rec.prim];

            const Scalar dw = dC.dot(g.color) + dA + d_nacc.dot(rec.n_cam) +
                              d_dnum * rec.plane_d;
            const Scalar Ti = st.weight / st.alpha;  // transmittance before this splat
            const Scalar d_alpha = dw * Ti - suffix / (1.0 - st.alpha);
            suffix += dw * st.weight;

            auto& p = partials[st.slot];
            p.d_color += dC * st.weight;
            p.d_ncam += d_nacc * st.weight;
            p.d_plane_d += d_dnum * st.weight;
            if (!st.clamped) {
              p.d_opacity += d_alpha * st.gauss;
              const Scalar d_gauss = d_alpha * g.opacity;
              const Vec2d d = pix - rec.mean;
              const Vec2d md = rec.cov_inv * d;
              p.d_mean += d_gauss * st.gauss * md;
              p.d_cov_inv += (-0.5 * d_gauss * st.gauss) * (d * d.transpose());
            }
          }
        }
      }
    }
  });

  // Deterministic reduction in tile order, then per-splat chain to params.
  std::vector<SplatPartial> merged(cache.splats.size());
  for (std::size_t t = 0; t < n_tiles; ++t) {
    const auto& list = cache.tile_splats[t];
    for (std::size_t li = 0; li < tile_partials[t].size(); ++li)
      merged[list[li]].add(tile_partials[t][li]);
  }

  GradientSet grads;
  grads.resize(cloud.size());
  const Vec3d cam_center = cam.center();

  for (std::size_t s = 0; s < cache.splats.size(); ++s) {
    const auto& rec = cache.splats[s];
    const auto& p = merged[s];
    const auto& g = cloud.primitives[rec.prim];

    grads.d_color[rec.prim] += p.d_color;

    // cov_inv -> cov2d.
    const Mat2d M = rec.cov_inv;
    const Mat2d d_cov2d = -M * p.d_cov_inv * M;

    // cov2d = T2 * Sigma * T2^T (+ floor), T2 = J * W.
    const Quatd qn = g.rotation.normalized();
    const Mat3d Rq = qn.toRotationMatrix();
    const Mat3d sigma = Rq * g.scales.cwiseProduct(g.scales).asDiagonal() * Rq.transpose();
    const Eigen::Matrix<Scalar, 2, 3> J = projection_jacobian(cam, rec.p_cam);
    const Eigen::Matrix<Scalar, 2, 3> T2 = J * cam.R;

    const Mat3d d_sigma = T2.transpose() * d_cov2d * T2;
    const Eigen::Matrix<Scalar, 2, 3> d_T2 = 2.0 * d_cov2d * T2 * sigma;
    const Eigen::Matrix<Scalar, 2, 3> d_J = d_T2 * cam.R.transpose();

    // J's own dependence on the camera-space mean.
    const Scalar z = rec.p_cam.z();
    const Scalar iz2 = 1.0 / (z * z);
    const Scalar iz3 = iz2 / z;
    Vec3d d_pcam = Vec3d::Zero();
    d_pcam.x() += d_J(0, 2) * (-cam.fx * iz2);
    d_pcam.y() += d_J(1, 2) * (-cam.fy * iz2);
    d_pcam.z() += d_J(0, 0) * (-cam.fx * iz2) + d_J(1, 1) * (-cam.fy * iz2) +
                  d_J(0, 2) * (2.0 * cam.fx * rec.p_cam.x() * iz3) +
                  d_J(1, 2) * (2.0 * cam.fy * rec.p_cam.y() * iz3);

    // mean2d = project(p_cam).
    d_pcam += J.transpose() * p.d_mean;

    // plane_d = dot(n_cam, p_cam).
    d_pcam += p.d_plane_d * rec.n_cam;
    const Vec3d d_ncam = p.d_ncam + p.d_plane_d * rec.p_cam;

    // n_cam = W * n_world, n_world = sign * Rq * e_k. The sign and axis
    // choice are piecewise constant; gradient flows through Rq only.
    const Vec3d d_nworld = cam.R.transpose() * d_ncam;
    const int k = shortest_axis<Scalar>(g.scales);
    Vec3d view_dir = g.position - cam_center;
    const Scalar vn = view_dir.norm();
    view_dir = vn > 1e-12 ? Vec3d(view_dir / vn) : Vec3d(0, 0, 1);
    const Scalar sign = Rq.col(k).dot(view_dir) > 0 ? -1.0 : 1.0;

    // Sigma = Rq * diag(s^2) * Rq^T.
    const Mat3d d_sigma_sym = d_sigma + d_sigma.transpose();
    Mat3d d_Rq = d_sigma_sym * Rq * g.scales.cwiseProduct(g.scales).asDiagonal();
    d_Rq.col(k) += sign * d_nworld;

    const Mat3d mid = Rq.transpose() * (0.5 * d_sigma_sym) * Rq;
    for (int a = 0; a < 3; ++a)
      grads.d_scales[rec.prim][a] += 2.0 * g.scales[a] * mid(a, a);

    // Rq -> quaternion (through normalization).
    const auto Jr = rotation_jacobian(qn);
    Vec4d d_qn;
    for (int c = 0; c < 4; ++c) d_qn[c] = (Jr[c].array() * d_Rq.array()).sum();
    const Vec4d qv(qn.w(), qn.x(), qn.y(), qn.z());
    const Scalar qnorm = g.rotation.norm();
    grads.d_rotation[rec.prim] += (d_qn - qv * qv.dot(d_qn)) / qnorm;

    grads.d_opacity[rec.prim] += p.d_opacity;
    grads.d_position[rec.prim] += cam.R.transpose() * d_pcam;
  }

  return grads;
}

}  // namespace spags

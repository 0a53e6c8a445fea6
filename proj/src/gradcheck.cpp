#include "spags/gradcheck.hpp"

#include "spags/rng.hpp"

#include <cmath>
#include <sstream>

namespace spags {

Scalar GradCheckReport::max_err() const {
  return std::max({max_err_position, max_err_rotation, max_err_scales, max_err_opacity,
                   max_err_color});
}

std::string GradCheckReport::summary() const {
  std::ostringstream os;
  os << "position " << max_err_position << "  rotation " << max_err_rotation
     << "  scales " << max_err_scales << "  opacity " << max_err_opacity << "  color "
     << max_err_color;
  return os.str();
}

namespace {

struct Functional {
  RenderFunctional kind;
  Image weights;  // random projection, plus frozen validity for depth
};

Functional make_functional(RenderFunctional kind, const RenderBuffers& base,
                           std::uint64_t seed) {
  Functional f{kind, {}};
  std::mt19937_64 rng = make_rng(seed, "gradcheck");
  std::uniform_real_distribution<Scalar> uni(-1.0, 1.0);
  const int w = base.color.width, h = base.color.height;
  const int ch = (kind == RenderFunctional::Color || kind == RenderFunctional::Normal) ? 3 : 1;
  f.weights = Image(w, h, ch);
  for (std::ptrdiff_t i = 0; i < f.weights.size(); ++i) f.weights.data[i] = uni(rng);
  if (kind == RenderFunctional::Depth) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (base.depth.at(x, y) == 0.0) f.weights.at(x, y) = 0.0;
  }
  return f;
}

Scalar evaluate(const Functional& f, const RenderBuffers& buffers) {
  const Image* src = nullptr;
  switch (f.kind) {
    case RenderFunctional::Color: src = &buffers.color; break;
    case RenderFunctional::Alpha: src = &buffers.alpha; break;
    case RenderFunctional::Depth: src = &buffers.depth; break;
    case RenderFunctional::Normal: src = &buffers.normal; break;
  }
  return (f.weights.data * src->data).sum();
}

PixelGradients upstream_of(const Functional& f) {
  PixelGradients up;
  switch (f.kind) {
    case RenderFunctional::Color: up.d_color = f.weights; break;
    case RenderFunctional::Alpha: up.d_alpha = f.weights; break;
    case RenderFunctional::Depth: up.d_depth = f.weights; break;
    case RenderFunctional::Normal: up.d_normal = f.weights; break;
  }
  return up;
}

Scalar rel_err(Scalar analytic, Scalar fd, Scalar floor) {
  const Scalar denom = std::max({std::abs(analytic), std::abs(fd), floor});
  return std::abs(analytic - fd) / denom;
}

}  // namespace

GradCheckReport gradcheck(const GaussianCloud& cloud, const Camera& cam,
                          RenderFunctional functional, const RenderConfig& config,
                          Scalar step, std::uint64_t seed, Scalar denom_floor) {
  const RenderBuffers base = render(cloud, cam, config);
  const Functional f = make_functional(functional, base, seed);
  const GradientSet grads = render_backward(cloud, cam, base, upstream_of(f));

  GaussianCloud probe = cloud;
  auto fd_for = [&](std::size_t i, auto&& setter) {
    setter(probe.primitives[i], step);
    const Scalar hi = evaluate(f, render(probe, cam, config));
    setter(probe.primitives[i], -2.0 * step);
    const Scalar lo = evaluate(f, render(probe, cam, config));
    setter(probe.primitives[i], step);  // restore
    return (hi - lo) / (2.0 * step);
  };

  GradCheckReport report;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (int a = 0; a < 3; ++a) {
      const Scalar fd = fd_for(i, [a](GaussianPrimitive& g, Scalar d) { g.position[a] += d; });
      report.max_err_position =
          std::max(report.max_err_position, rel_err(grads.d_position[i][a], fd, denom_floor));
    }
    for (int a = 0; a < 4; ++a) {
      const Scalar fd = fd_for(i, [a](GaussianPrimitive& g, Scalar d) {
        Vec4d q(g.rotation.w(), g.rotation.x(), g.rotation.y(), g.rotation.z());
        q[a] += d;
        g.rotation = Quatd(q[0], q[1], q[2], q[3]);
      });
      report.max_err_rotation =
          std::max(report.max_err_rotation, rel_err(grads.d_rotation[i][a], fd, denom_floor));
    }
    for (int a = 0; a < 3; ++a) {
      const Scalar fd = fd_for(i, [a](GaussianPrimitive& g, Scalar d) { g.scales[a] += d; });
      report.max_err_scales =
          std::max(report.max_err_scales, rel_err(grads.d_scales[i][a], fd, denom_floor));
    }
    {
      const Scalar fd = fd_for(i, [](GaussianPrimitive& g, Scalar d) { g.opacity += d; });
      report.max_err_opacity =
          std::max(report.max_err_opacity, rel_err(grads.d_opacity[i], fd, denom_floor));
    }
    for (int a = 0; a < 3; ++a) {
      const Scalar fd = fd_for(i, [a](GaussianPrimitive& g, Scalar d) { g.color[a] += d; });
      report.max_err_color =
          std::max(report.max_err_color, rel_err(grads.d_color[i][a], fd, denom_floor));
    }
  }
  return report;
}

}  // namespace spags

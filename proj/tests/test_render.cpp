#include "spags/render.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace spags;
using namespace spags::testutil;

TEST_CASE("render: empty region returns background and zero alpha") {
  GaussianCloud cloud;
  GaussianPrimitive g;
  g.position = Vec3d(0, 0, 3);
  g.scales = Vec3d(0.05, 0.05, 0.05);
  g.opacity = 0.9;
  cloud.primitives.push_back(g);

  RenderConfig cfg;
  cfg.background = Vec3d(0.2, 0.3, 0.4);
  const Camera cam = front_camera();
  const auto buffers = render(cloud, cam, cfg);

  CHECK((buffers.color.rgb(0, 0) - cfg.background).norm() < 1e-12);
  CHECK(buffers.alpha.at(0, 0) == 0.0);
  CHECK(buffers.depth.at(0, 0) == 0.0);
  CHECK(buffers.contributors_at(0, 0).empty());
}

TEST_CASE("render: two stacked opaque-0.6 splats blend 0.6 / 0.24") {
  // Principal point on the center of pixel (15,15) so the Gaussian peak
  // evaluates to exactly 1 there.
  Camera cam = front_camera(32, 32, 40.0);
  cam.cx = 15.5;
  cam.cy = 15.5;

  GaussianCloud cloud;
  for (const Scalar depth : {2.0, 3.0}) {
    GaussianPrimitive g;
    g.position = Vec3d(0, 0, depth);
    g.scales = Vec3d(0.3, 0.3, 0.3);
    g.opacity = 0.6;
    g.color = depth < 2.5 ? Vec3d(1, 0, 0) : Vec3d(0, 1, 0);
    cloud.primitives.push_back(g);
  }

  const auto buffers = render(cloud, cam);
  const auto& contribs = buffers.contributors_at(15, 15);
  REQUIRE(contribs.size() == 2);
  CHECK(contribs[0].weight == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(contribs[1].weight == doctest::Approx(0.24).epsilon(1e-12));
  CHECK(buffers.alpha.at(15, 15) == doctest::Approx(0.84).epsilon(1e-12));
  CHECK(buffers.color.at(15, 15, 0) == doctest::Approx(0.6));
  CHECK(buffers.color.at(15, 15, 1) == doctest::Approx(0.24));
}

TEST_CASE("render: flat splat facing the camera reports plane depth and normal") {
  GaussianCloud cloud;
  GaussianPrimitive g;
  g.position = Vec3d(0, 0, 2);
  g.scales = Vec3d(0.5, 0.5, 1e-4);
  g.opacity = 0.95;
  cloud.primitives.push_back(g);

  const Camera cam = front_camera(32, 32, 40.0);
  const auto buffers = render(cloud, cam);

  int covered = 0;
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      if (buffers.alpha.at(x, y) < 0.5) continue;
      ++covered;
      CHECK(buffers.depth.at(x, y) == doctest::Approx(2.0).epsilon(1e-3));
      const Vec3d n = buffers.normal.rgb(x, y);
      CHECK((n - Vec3d(0, 0, -1)).norm() < 1e-9);
    }
  }
  CHECK(covered > 20);
}

TEST_CASE("render: tilted flat splat matches analytic ray-plane depth everywhere") {
  GaussianCloud cloud;
  GaussianPrimitive g;
  g.position = Vec3d(0.1, -0.05, 2.5);
  g.rotation = Quatd(Eigen::AngleAxisd(0.5, Vec3d(1, 1, 0).normalized()));
  g.scales = Vec3d(0.8, 0.8, 1e-4);
  g.opacity = 0.97;
  cloud.primitives.push_back(g);

  const Camera cam = front_camera(48, 48, 60.0);
  const auto buffers = render(cloud, cam);

  // Plane through the splat center with its world normal.
  const Vec3d n_world = planar_normal(g, (g.position - cam.center()).normalized());
  const Vec3d n_cam = cam.R * n_world;
  const Vec3d p_cam = cam.to_camera(g.position);
  const Scalar d = n_cam.dot(p_cam);

  int covered = 0;
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 48; ++x) {
      if (buffers.alpha.at(x, y) < 0.5) continue;
      ++covered;
      const Vec3d ray = cam.pixel_ray(x + 0.5, y + 0.5);
      const Scalar analytic = d / n_cam.dot(ray);
      CHECK(buffers.depth.at(x, y) == doctest::Approx(analytic).epsilon(1e-3));
    }
  }
  CHECK(covered > 50);
}

TEST_CASE("render: near-plane cull drops the primitive") {
  GaussianCloud cloud;
  GaussianPrimitive g;
  g.position = Vec3d(0, 0, 0.01);
  g.opacity = 0.9;
  cloud.primitives.push_back(g);
  const Camera cam = front_camera();
  const auto buffers = render(cloud, cam);
  CHECK(buffers.alpha.data.maxCoeff() == 0.0);
  CHECK(buffers.cache->splats.empty());
}

TEST_CASE("render: weights sum to alpha and contributors are depth sorted") {
  RenderConfig cfg;
  cfg.max_contributors = 4096;
  const Camera cam = front_camera();
  for (int scene = 0; scene < 25; ++scene) {
    const GaussianCloud cloud = random_cloud(30, 100 + scene);
    const auto buffers = render(cloud, cam, cfg);
    for (int y = 0; y < cam.height; ++y) {
      for (int x = 0; x < cam.width; ++x) {
        const auto& contribs = buffers.contributors_at(x, y);
        Scalar sum = 0.0;
        for (const auto& c : contribs) {
          CHECK(c.weight >= 0.0);
          sum += c.weight;
        }
        CHECK(sum == buffers.alpha.at(x, y));  // same accumulation order
        CHECK(buffers.alpha.at(x, y) <= 1.0 + 1e-6);
        for (std::size_t k = 1; k < contribs.size(); ++k) {
          const auto pa = project_gaussian(cloud.primitives[contribs[k - 1].index], cam);
          const auto pb = project_gaussian(cloud.primitives[contribs[k].index], cam);
          CHECK(pa->depth <= pb->depth);
        }
      }
    }
  }
}

TEST_CASE("render: bit-identical across thread counts") {
  const GaussianCloud cloud = random_cloud(60, 7);
  const Camera cam = front_camera(40, 40);
  RenderConfig cfg1;
  cfg1.threads = 1;
  RenderConfig cfg4 = cfg1;
  cfg4.threads = 4;

  const auto a = render(cloud, cam, cfg1);
  const auto b = render(cloud, cam, cfg4);
  CHECK((a.color.data == b.color.data).all());
  CHECK((a.alpha.data == b.alpha.data).all());
  CHECK((a.depth.data == b.depth.data).all());
  CHECK((a.normal.data == b.normal.data).all());
}

TEST_CASE("render: back-to-front compositing agrees with front-to-back") {
  RenderConfig cfg;
  cfg.max_contributors = 4096;
  cfg.transmittance_min = 0.0;
  const Camera cam = front_camera();
  for (int scene = 0; scene < 10; ++scene) {
    const GaussianCloud cloud = random_cloud(25, 500 + scene);
    const auto buffers = render(cloud, cam, cfg);
    for (int y = 0; y < cam.height; ++y) {
      for (int x = 0; x < cam.width; ++x) {
        const auto& contribs = buffers.contributors_at(x, y);
        // Recover per-splat alphas from the weights, then fold back-to-front.
        std::vector<Scalar> alphas(contribs.size());
        Scalar prefix = 0.0;
        for (std::size_t k = 0; k < contribs.size(); ++k) {
          alphas[k] = contribs[k].weight / (1.0 - prefix);
          prefix += contribs[k].weight;
        }
        Vec3d color = cfg.background;
        for (int k = static_cast<int>(contribs.size()) - 1; k >= 0; --k) {
          const Vec3d c = cloud.primitives[contribs[k].index].color;
          color = alphas[k] * c + (1.0 - alphas[k]) * color;
        }
        CHECK((color - buffers.color.rgb(x, y)).cwiseAbs().maxCoeff() < 1e-6);
      }
    }
  }
}

TEST_CASE("render: contributor cap keeps the frontmost entries") {
  GaussianCloud cloud;
  for (int i = 0; i < 10; ++i) {
    GaussianPrimitive g;
    g.position = Vec3d(0, 0, 2.0 + 0.1 * i);
    g.scales = Vec3d(0.4, 0.4, 0.4);
    g.opacity = 0.3;
    cloud.primitives.push_back(g);
  }
  RenderConfig cfg;
  cfg.max_contributors = 3;
  const Camera cam = front_camera();
  const auto buffers = render(cloud, cam, cfg);
  const auto& contribs = buffers.contributors_at(16, 16);
  REQUIRE(contribs.size() == 3);
  CHECK(contribs[0].index == 0);
  CHECK(contribs[1].index == 1);
  CHECK(contribs[2].index == 2);
  // Blending itself is not capped: alpha exceeds the 3-entry partial sum.
  Scalar partial = 0.0;
  for (const auto& c : contribs) partial += c.weight;
  CHECK(buffers.alpha.at(16, 16) > partial);
}

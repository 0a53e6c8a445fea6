#include "spags/synthetic.hpp"

#include "spags/render.hpp"

#include <doctest.h>

#include <cmath>

using namespace spags;

namespace {

SceneSpec spec_of(const std::string& fixture, Scalar joint_state = 0.0, int res = 96) {
  SceneSpec s;
  s.fixture = fixture;
  s.seed = 9;
  s.resolution = res;
  s.n_candidates = 16;
  s.joint_state = joint_state;
  return s;
}

Scalar psnr_of(const Image& a, const Image& b) {
  const Scalar mse = (a.data - b.data).square().mean();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace

TEST_CASE("synthetic: sphere oracle depth matches the closed-form intersection") {
  const auto scene = SyntheticScene::build(spec_of("sphere"));
  const Camera& cam = scene.candidates()[0];
  const auto oracle = scene.render_oracle(cam);

  const Vec3d origin = cam.center();
  int checked = 0;
  for (int y = 0; y < cam.height; y += 3) {
    for (int x = 0; x < cam.width; x += 3) {
      if (oracle.mask.at(x, y) == 0.0) continue;
      const Vec3d dir = cam.R.transpose() * cam.pixel_ray(x + 0.5, y + 0.5);
      // Independent quadratic solve for |ray cap sphere(r=0.5)|.
      const Scalar a = dir.squaredNorm();
      const Scalar b = 2 * origin.dot(dir);
      const Scalar c = origin.squaredNorm() - 0.25;
      const Scalar disc = b * b - 4 * a * c;
      REQUIRE(disc >= 0);
      const Scalar t_near = (-b - std::sqrt(disc)) / (2 * a);
      CHECK(oracle.depth.at(x, y) == doctest::Approx(t_near).epsilon(1e-9));
      const Vec3d p = origin + oracle.depth.at(x, y) * dir;
      CHECK(std::abs(p.norm() - 0.5) < 1e-9);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("synthetic: oracle depth and mask are consistent") {
  for (const char* fixture : {"hinge", "drawer", "sphere", "plane", "plane_pair"}) {
    const auto scene = SyntheticScene::build(spec_of(fixture, 0.4));
    const auto oracle = scene.render_oracle(scene.candidates()[3]);
    for (std::ptrdiff_t i = 0; i < oracle.mask.size(); ++i) {
      CHECK((oracle.depth.data[i] > 0.0) == (oracle.mask.data[i] == 1.0));
      CHECK((oracle.part_id.data[i] >= 0.0) == (oracle.mask.data[i] == 1.0));
    }
  }
}

TEST_CASE("synthetic: hinge joint states differ only where the lid is involved") {
  const auto closed = SyntheticScene::build(spec_of("hinge", 0.0));
  const auto open = SyntheticScene::build(spec_of("hinge", 0.785));
  // Shared camera: candidate poses depend on the scene bounds, so pick a
  // fixed external view.
  const Camera cam =
      Camera::look_at(Vec3d(1.6, -1.8, 1.4), Vec3d(0, 0, 0.1), Vec3d::UnitZ(), 96, 96, 160);

  const auto a = closed.render_oracle(cam);
  const auto b = open.render_oracle(cam);
  for (std::ptrdiff_t i = 0; i < a.part_id.size(); ++i) {
    if (a.part_id.data[i] != b.part_id.data[i])
      CHECK((a.part_id.data[i] == 1.0 || b.part_id.data[i] == 1.0));
  }
  // The lid did move.
  CHECK((a.part_id.data != b.part_id.data).any());
}

TEST_CASE("synthetic: same seed gives bit-identical scenes") {
  const auto s1 = SyntheticScene::build(spec_of("drawer", 0.2));
  const auto s2 = SyntheticScene::build(spec_of("drawer", 0.2));
  REQUIRE(s1.candidates().size() == s2.candidates().size());
  for (std::size_t i = 0; i < s1.candidates().size(); ++i) {
    CHECK((s1.candidates()[i].R - s2.candidates()[i].R).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s1.candidates()[i].t - s2.candidates()[i].t).norm() == 0.0);
  }
  const auto r1 = s1.render_oracle(s1.candidates()[5]);
  const auto r2 = s2.render_oracle(s2.candidates()[5]);
  CHECK((r1.color.data == r2.color.data).all());
  CHECK((r1.depth.data == r2.depth.data).all());
}

TEST_CASE("synthetic: candidate poses face the scene centroid") {
  const auto scene = SyntheticScene::build(spec_of("hinge", 1.1));
  for (const auto& cam : scene.candidates()) {
    cam.validate();
    const Vec3d c_cam = cam.to_camera(scene.centroid());
    CHECK(c_cam.z() > 0);
    const Vec2d pix = cam.project(c_cam);
    CHECK(std::abs(pix.x() - cam.cx) < 1e-6);
    CHECK(std::abs(pix.y() - cam.cy) < 1e-6);
  }
}

TEST_CASE("synthetic: unknown fixture rejected") {
  CHECK_THROWS(SyntheticScene::build(spec_of("teapot")));
}

TEST_CASE("synthetic: scene spec JSON round-trip") {
  SceneSpec s = spec_of("plane_pair", 0.3);
  s.radius = 3.25;
  const std::string path = "/tmp/spags_scene.json";
  save_scene_json(path, s);
  const SceneSpec back = load_scene_json(path);
  CHECK(back.fixture == s.fixture);
  CHECK(back.seed == s.seed);
  CHECK(back.resolution == s.resolution);
  CHECK(back.radius == doctest::Approx(s.radius));
  CHECK(back.joint_state == doctest::Approx(s.joint_state));
  std::remove(path.c_str());
}

TEST_CASE("synthetic: ground-truth meshes carry parts and positive area") {
  const auto scene = SyntheticScene::build(spec_of("drawer", 0.15));
  const TriangleMesh whole = scene.mesh();
  CHECK(whole.area() > 1.0);
  CHECK(whole.vertex_parts.size() == whole.vertices.size());
  for (int part = 0; part < scene.part_count(); ++part) {
    const TriangleMesh pm = scene.mesh(part);
    CHECK(!pm.empty());
    for (const int p : pm.vertex_parts) CHECK(p == part);
  }
}

TEST_CASE("synthetic: surface-sampled cloud reproduces the oracle render at 30 dB") {
  const auto scene = SyntheticScene::build(spec_of("plane", 0.0, 128));
  const auto samples = scene.sample_surface(0.012, 5);
  const GaussianCloud cloud =
      cloud_from_surface(samples, 0.012, scene.part_count(), /*opacity=*/0.995);

  const Camera& cam = scene.candidates()[1];
  const auto oracle = scene.render_oracle(cam);
  RenderConfig cfg;
  cfg.threads = 4;
  const auto rendered = render(cloud, cam, cfg);

  const Scalar psnr = psnr_of(rendered.color, oracle.color);
  INFO("psnr = ", psnr);
  CHECK(psnr >= 30.0);
}

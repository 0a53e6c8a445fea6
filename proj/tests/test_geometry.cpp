#include "spags/camera.hpp"
#include "spags/gaussian.hpp"
#include "spags/geometry.hpp"
#include "spags/rng.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace spags;

namespace {

Quatd random_unit_quat(std::mt19937_64& rng) {
  std::normal_distribution<Scalar> n(0.0, 1.0);
  Quatd q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q;
}

Camera test_camera(Scalar focal = 100.0, int w = 64, int h = 64) {
  Camera cam;
  cam.width = w;
  cam.height = h;
  cam.fx = cam.fy = focal;
  cam.cx = w / 2.0;
  cam.cy = h / 2.0;
  cam.near_plane = 0.1;
  return cam;
}

}  // namespace

TEST_CASE("build_covariance: isotropic and axis-aligned cases") {
  const Mat3d iso = build_covariance<Scalar>(Quatd::Identity(), Vec3d(1, 1, 1));
  CHECK((iso - Mat3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);

  const Mat3d axis = build_covariance<Scalar>(Quatd::Identity(), Vec3d(2, 1, 0.5));
  const Mat3d expected = Vec3d(4, 1, 0.25).asDiagonal();
  CHECK((axis - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("build_covariance: 90 degree z-rotation permutes the axes") {
  const Scalar s = std::sqrt(0.5);
  const Quatd rz90(s, 0, 0, s);
  const Mat3d cov = build_covariance<Scalar>(rz90, Vec3d(2, 1, 1));
  const Mat3d expected = Vec3d(1, 4, 1).asDiagonal();
  CHECK((cov - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("build_covariance: rotation equivariance and spectrum") {
  std::mt19937_64 rng = make_rng(3, "geom");
  std::uniform_real_distribution<Scalar> uni(0.2, 3.0);
  for (int it = 0; it < 50; ++it) {
    const Quatd r = random_unit_quat(rng);
    const Quatd q = random_unit_quat(rng);
    const Vec3d scales(uni(rng), uni(rng), uni(rng));

    const Mat3d lhs = build_covariance<Scalar>(q * r, scales);
    const Mat3d Rq = q.toRotationMatrix();
    const Mat3d rhs = Rq * build_covariance<Scalar>(r, scales) * Rq.transpose();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);

    Eigen::SelfAdjointEigenSolver<Mat3d> eig(lhs);
    Vec3d sq = scales.cwiseProduct(scales);
    std::sort(sq.data(), sq.data() + 3);
    CHECK((eig.eigenvalues() - sq).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(eig.eigenvalues().minCoeff() > 0);
  }
}

TEST_CASE("build_covariance: non-unit quaternion rejected by validate") {
  GaussianPrimitive g;
  g.rotation = Quatd(1.0, 0.1, 0.0, 0.0);  // norm > 1 + 1e-6
  CHECK_THROWS_AS(validate(g, 1), ValidationError);
}

TEST_CASE("planar_normal: flattened disk and sign flip") {
  GaussianPrimitive g;
  g.scales = Vec3d(1, 1, 0.01);
  CHECK((planar_normal(g, Vec3d(0, 0, 1)) - Vec3d(0, 0, -1)).norm() < 1e-12);
  CHECK((planar_normal(g, Vec3d(0, 0, -1)) - Vec3d(0, 0, 1)).norm() < 1e-12);
}

TEST_CASE("planar_normal: rotated shortest axis") {
  const Scalar s = std::sqrt(0.5);
  GaussianPrimitive g;
  g.rotation = Quatd(s, s, 0, 0);  // 90 deg about x
  g.scales = Vec3d(1, 1, 0.01);
  CHECK((planar_normal(g, Vec3d(0, -1, 0)) - Vec3d(0, 1, 0)).norm() < 1e-9);
}

TEST_CASE("planar_normal: always unit and facing the viewer") {
  std::mt19937_64 rng = make_rng(4, "geom");
  std::uniform_real_distribution<Scalar> uni(0.01, 2.0);
  std::normal_distribution<Scalar> n(0.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    GaussianPrimitive g;
    g.rotation = random_unit_quat(rng);
    g.scales = Vec3d(uni(rng), uni(rng), uni(rng));
    const Vec3d view = Vec3d(n(rng), n(rng), n(rng)).normalized();
    const Vec3d normal = planar_normal(g, view);
    CHECK(std::abs(normal.norm() - 1.0) < 1e-9);
    CHECK(normal.dot(view) <= 0.0);
  }
}

TEST_CASE("planar_normal: scale ties broken by lowest axis index") {
  GaussianPrimitive g;
  g.scales = Vec3d(1, 1, 1);
  const Vec3d normal = planar_normal(g, Vec3d(0, 0, 1));
  CHECK((normal - Vec3d(1, 0, 0)).norm() < 1e-12);  // axis 0, orthogonal so no flip
}

TEST_CASE("project_gaussian: on-axis point lands at the principal point") {
  Camera cam = test_camera(100.0);
  GaussianPrimitive g;
  g.position = Vec3d(0, 0, 2);
  const auto proj = project_gaussian(g, cam);
  REQUIRE(proj.has_value());
  CHECK(proj->mean.x() == doctest::Approx(cam.cx));
  CHECK(proj->mean.y() == doctest::Approx(cam.cy));
  CHECK(proj->depth == doctest::Approx(2.0));
}

TEST_CASE("project_gaussian: isotropic on-axis covariance scales by (f/d)^2") {
  Camera cam = test_camera(120.0);
  GaussianPrimitive g;
  g.position = Vec3d(0, 0, 4);
  g.scales = Vec3d(0.3, 0.3, 0.3);
  const auto proj = project_gaussian(g, cam, /*cov2d_floor=*/0.0);
  REQUIRE(proj.has_value());
  const Scalar expected = std::pow(120.0 / 4.0 * 0.3, 2);
  CHECK(proj->cov(0, 0) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(proj->cov(1, 1) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(std::abs(proj->cov(0, 1)) < 1e-12);
}

TEST_CASE("project_gaussian: near-plane cull") {
  Camera cam = test_camera();
  GaussianPrimitive g;
  g.position = Vec3d(0, 0, 0.01);
  CHECK(!project_gaussian(g, cam).has_value());
}

TEST_CASE("project_gaussian: depth ordering matches view-space z") {
  Camera cam = test_camera();
  std::mt19937_64 rng = make_rng(5, "geom");
  std::uniform_real_distribution<Scalar> uni(0.5, 10.0);
  std::uniform_real_distribution<Scalar> off(-0.5, 0.5);
  for (int it = 0; it < 50; ++it) {
    GaussianPrimitive a, b;
    a.position = Vec3d(off(rng), off(rng), uni(rng));
    b.position = Vec3d(off(rng), off(rng), uni(rng));
    const auto pa = project_gaussian(a, cam);
    const auto pb = project_gaussian(b, cam);
    REQUIRE(pa.has_value());
    REQUIRE(pb.has_value());
    CHECK((pa->depth < pb->depth) == (a.position.z() < b.position.z()));
  }
}

TEST_CASE("camera: look_at projects the target to the principal point") {
  const Vec3d eye(1.5, -2.0, 1.0);
  const Vec3d target(0.1, 0.2, 0.3);
  const Camera cam = Camera::look_at(eye, target, Vec3d(0, 0, 1), 64, 48, 80.0);
  cam.validate();
  const Vec3d p_cam = cam.to_camera(target);
  CHECK(p_cam.z() == doctest::Approx((target - eye).norm()));
  const Vec2d pix = cam.project(p_cam);
  CHECK(pix.x() == doctest::Approx(cam.cx).epsilon(1e-9));
  CHECK(pix.y() == doctest::Approx(cam.cy).epsilon(1e-9));
  CHECK((cam.center() - eye).norm() < 1e-9);
}

TEST_CASE("camera: validation rejects bad rotation and planes") {
  Camera cam = test_camera();
  cam.R(0, 0) = 2.0;
  CHECK_THROWS_AS(cam.validate(), ValidationError);
  Camera cam2 = test_camera();
  cam2.near_plane = 5.0;
  cam2.far_plane = 1.0;
  CHECK_THROWS_AS(cam2.validate(), ValidationError);
}

TEST_CASE("cloud validate checks reliability consistency and part probs") {
  GaussianCloud cloud;
  cloud.part_count = 2;
  GaussianPrimitive g;
  g.potential = 0.7;
  g.reliability = std::exp(-0.7);
  g.part_probs = VecXd::Zero(2);
  cloud.primitives.push_back(g);
  CHECK_NOTHROW(validate(cloud));

  cloud.primitives[0].reliability = 0.9;
  CHECK_THROWS_AS(validate(cloud), ValidationError);
}

TEST_CASE("aabb bounds over primitive centers") {
  GaussianCloud cloud;
  for (const auto& p : {Vec3d(0, 0, 0), Vec3d(1, 2, -1), Vec3d(-3, 0.5, 4)}) {
    GaussianPrimitive g;
    g.position = p;
    cloud.primitives.push_back(g);
  }
  const Aabb box = bounds(cloud);
  CHECK((box.lo - Vec3d(-3, 0, -1)).norm() < 1e-12);
  CHECK((box.hi - Vec3d(1, 2, 4)).norm() < 1e-12);
}

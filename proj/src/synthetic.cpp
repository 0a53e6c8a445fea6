#include "spags/synthetic.hpp"

#include "spags/geometry.hpp"
#include "spags/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>

namespace spags {

namespace {

constexpr Scalar kCheckerCell = 0.12;
constexpr Scalar kCheckerDim = 0.68;
const Vec3d kLightDir = Vec3d(0.35, -0.25, -0.9).normalized();

// Side-independent diffuse so a thin part renders the same color from
// either face.
Scalar shade(const Vec3d& n_world) {
  return 0.55 + 0.45 * std::abs(n_world.dot(kLightDir));
}

// Checker with smooth transitions (band ~0.05 cell) so the albedo stays
// representable by finite splat mixtures.
Scalar checker(Scalar u, Scalar v, Scalar cell = kCheckerCell) {
  const Scalar s = std::sin(std::numbers::pi * u / cell) *
                   std::sin(std::numbers::pi * v / cell);
  const Scalar blend = 0.5 + 0.5 * std::tanh(s / 0.15);
  return kCheckerDim + (1.0 - kCheckerDim) * blend;
}

}  // namespace

struct SyntheticScene::Shape {
  int part = 0;
  Vec3d base_color = Vec3d::Constant(0.7);
  Mat3d R = Mat3d::Identity();  // local-to-world
  Vec3d t = Vec3d::Zero();

  virtual ~Shape() = default;

  // Anisotropic samples along sharp silhouette edges, where an optimized
  // splat model would place small elongated primitives.
  void sample_edge(std::vector<SurfaceSample>& out, const Vec3d& a_local,
                   const Vec3d& b_local, const Vec3d& n_local, Scalar spacing) const {
    const Scalar len = (b_local - a_local).norm();
    const int n = std::max(2, static_cast<int>(std::ceil(2.0 * len / spacing)));
    const Vec3d dir_local = (b_local - a_local) / len;
    for (int i = 0; i < n; ++i) {
      const Vec3d p = a_local + (i + 0.5) * (len / n) * dir_local;
      const Vec3d n_world = R * n_local;
      SurfaceSample s{R * p + t, n_world, color_at(p, n_local, n_world), part,
                      R * dir_local, Vec2d(0.4 * spacing, 0.22 * spacing)};
      out.push_back(s);
    }
  }

  // Ray in local coordinates; returns hit parameter, local point, local normal.
  virtual bool intersect_local(const Vec3d& o, const Vec3d& d, Scalar& t_hit,
                               Vec3d& p_local, Vec3d& n_local) const = 0;
  virtual Scalar albedo_factor(const Vec3d& p_local, const Vec3d& n_local) const = 0;
  virtual void triangulate(TriangleMesh& mesh) const = 0;
  virtual void sample(std::vector<SurfaceSample>& out, Scalar spacing) const = 0;
  virtual void corners(std::vector<Vec3d>& out) const = 0;

  void apply_world(const Mat3d& Rw, const Vec3d& tw) {
    R = Rw * R;
    t = Rw * t + tw;
  }

  Vec3d color_at(const Vec3d& p_local, const Vec3d& n_local, const Vec3d& n_world) const {
    return base_color * albedo_factor(p_local, n_local) * shade(n_world);
  }
};

namespace {

using Shape = SyntheticScene::Shape;

struct BoxShape final : Shape {
  Vec3d half = Vec3d::Constant(0.5);

  bool intersect_local(const Vec3d& o, const Vec3d& d, Scalar& t_hit, Vec3d& p_local,
                       Vec3d& n_local) const override {
    Scalar t0 = -std::numeric_limits<Scalar>::infinity();
    Scalar t1 = std::numeric_limits<Scalar>::infinity();
    int axis0 = -1;
    for (int a = 0; a < 3; ++a) {
      if (std::abs(d[a]) < 1e-15) {
        if (std::abs(o[a]) > half[a]) return false;
        continue;
      }
      Scalar lo = (-half[a] - o[a]) / d[a];
      Scalar hi = (half[a] - o[a]) / d[a];
      if (lo > hi) std::swap(lo, hi);
      if (lo > t0) {
        t0 = lo;
        axis0 = a;
      }
      t1 = std::min(t1, hi);
      if (t0 > t1) return false;
    }
    if (t0 < 1e-9 || axis0 < 0) return false;  // inside or behind: skip
    t_hit = t0;
    p_local = o + t0 * d;
    n_local = Vec3d::Zero();
    n_local[axis0] = p_local[axis0] > 0 ? 1.0 : -1.0;
    return true;
  }

  Scalar albedo_factor(const Vec3d& p, const Vec3d& n) const override {
    int a = 0;
    for (int k = 1; k < 3; ++k)
      if (std::abs(n[k]) > std::abs(n[a])) a = k;
    const int u = (a + 1) % 3, v = (a + 2) % 3;
    return checker(p[u], p[v]);
  }

  void triangulate(TriangleMesh& mesh) const override {
    const int base = static_cast<int>(mesh.vertices.size());
    for (int mask = 0; mask < 8; ++mask) {
      Vec3d c((mask & 1) ? half.x() : -half.x(), (mask & 2) ? half.y() : -half.y(),
              (mask & 4) ? half.z() : -half.z());
      mesh.vertices.push_back(R * c + t);
      mesh.vertex_parts.push_back(part);
    }
    static const int faces[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                    {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    for (const auto& f : faces) {
      mesh.triangles.push_back({base + f[0], base + f[1], base + f[2]});
      mesh.triangles.push_back({base + f[0], base + f[2], base + f[3]});
    }
  }

  void sample(std::vector<SurfaceSample>& out, Scalar spacing) const override {
    for (int a = 0; a < 3; ++a) {
      const int u = (a + 1) % 3, v = (a + 2) % 3;
      const int nu = std::max(1, static_cast<int>(std::ceil(2 * half[u] / spacing)));
      const int nv = std::max(1, static_cast<int>(std::ceil(2 * half[v] / spacing)));
      for (int side = -1; side <= 1; side += 2) {
        for (int iu = 0; iu < nu; ++iu) {
          for (int iv = 0; iv < nv; ++iv) {
            Vec3d p;
            p[a] = side * half[a];
            p[u] = -half[u] + (iu + 0.5) * 2 * half[u] / nu;
            p[v] = -half[v] + (iv + 0.5) * 2 * half[v] / nv;
            Vec3d n = Vec3d::Zero();
            n[a] = side;
            const Vec3d n_world = R * n;
            out.push_back({R * p + t, n_world, color_at(p, n, n_world), part});
          }
        }
        // Edge samples along the face boundary.
        Vec3d n = Vec3d::Zero();
        n[a] = side;
        for (int e = 0; e < 4; ++e) {
          Vec3d c0, c1;
          c0[a] = c1[a] = side * half[a];
          const Scalar su = (e == 0 || e == 3) ? -1.0 : 1.0;
          const Scalar sv = (e < 2) ? -1.0 : 1.0;
          if (e % 2 == 0) {
            c0[u] = -half[u];
            c1[u] = half[u];
            c0[v] = c1[v] = sv * half[v];
          } else {
            c0[v] = -half[v];
            c1[v] = half[v];
            c0[u] = c1[u] = su * half[u];
          }
          sample_edge(out, c0, c1, n, spacing);
        }
      }
    }
  }

  void corners(std::vector<Vec3d>& out) const override {
    for (int mask = 0; mask < 8; ++mask)
      out.push_back(R * Vec3d((mask & 1) ? half.x() : -half.x(),
                              (mask & 2) ? half.y() : -half.y(),
                              (mask & 4) ? half.z() : -half.z()) +
                    t);
  }
};

struct SphereShape final : Shape {
  Scalar radius = 0.5;

  bool intersect_local(const Vec3d& o, const Vec3d& d, Scalar& t_hit, Vec3d& p_local,
                       Vec3d& n_local) const override {
    const Scalar a = d.squaredNorm();
    const Scalar b = 2 * o.dot(d);
    const Scalar c = o.squaredNorm() - radius * radius;
    const Scalar disc = b * b - 4 * a * c;
    if (disc < 0) return false;
    const Scalar sq = std::sqrt(disc);
    Scalar root = (-b - sq) / (2 * a);
    if (root < 1e-9) root = (-b + sq) / (2 * a);
    if (root < 1e-9) return false;
    t_hit = root;
    p_local = o + root * d;
    n_local = p_local.normalized();
    return true;
  }

  Scalar albedo_factor(const Vec3d& p, const Vec3d&) const override {
    const Scalar theta = std::acos(std::clamp<Scalar>(p.z() / radius, -1.0, 1.0));
    const Scalar phi = std::atan2(p.y(), p.x());
    return checker(theta, phi, 0.5);
  }

  void triangulate(TriangleMesh& mesh) const override {
    const int n_lat = 32, n_lon = 64;
    const int base = static_cast<int>(mesh.vertices.size());
    for (int i = 0; i <= n_lat; ++i) {
      const Scalar th = std::numbers::pi * i / n_lat;
      for (int j = 0; j < n_lon; ++j) {
        const Scalar ph = 2 * std::numbers::pi * j / n_lon;
        const Vec3d p(radius * std::sin(th) * std::cos(ph),
                      radius * std::sin(th) * std::sin(ph), radius * std::cos(th));
        mesh.vertices.push_back(R * p + t);
        mesh.vertex_parts.push_back(part);
      }
    }
    auto idx = [&](int i, int j) { return base + i * n_lon + (j % n_lon); };
    for (int i = 0; i < n_lat; ++i) {
      for (int j = 0; j < n_lon; ++j) {
        mesh.triangles.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
        mesh.triangles.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
      }
    }
  }

  void sample(std::vector<SurfaceSample>& out, Scalar spacing) const override {
    const Scalar area = 4 * std::numbers::pi * radius * radius;
    const int n = std::max(8, static_cast<int>(area / (spacing * spacing)));
    const Scalar golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const Scalar z = 1.0 - 2.0 * (i + 0.5) / n;
      const Scalar r = std::sqrt(std::max<Scalar>(0.0, 1.0 - z * z));
      const Scalar ph = golden * i;
      const Vec3d nl(r * std::cos(ph), r * std::sin(ph), z);
      const Vec3d p = radius * nl;
      const Vec3d n_world = R * nl;
      out.push_back({R * p + t, n_world, color_at(p, nl, n_world), part});
    }
  }

  void corners(std::vector<Vec3d>& out) const override {
    for (int a = 0; a < 3; ++a)
      for (int side = -1; side <= 1; side += 2) {
        Vec3d p = Vec3d::Zero();
        p[a] = side * radius;
        out.push_back(R * p + t);
      }
  }
};

// Finite two-sided rectangle in the local z = 0 plane.
struct RectShape final : Shape {
  Vec2d half = Vec2d(0.5, 0.5);

  bool intersect_local(const Vec3d& o, const Vec3d& d, Scalar& t_hit, Vec3d& p_local,
                       Vec3d& n_local) const override {
    if (std::abs(d.z()) < 1e-15) return false;
    const Scalar s = -o.z() / d.z();
    if (s < 1e-9) return false;
    const Vec3d p = o + s * d;
    if (std::abs(p.x()) > half.x() || std::abs(p.y()) > half.y()) return false;
    t_hit = s;
    p_local = p;
    n_local = Vec3d(0, 0, d.z() > 0 ? -1.0 : 1.0);
    return true;
  }

  Scalar albedo_factor(const Vec3d& p, const Vec3d&) const override {
    return checker(p.x(), p.y());
  }

  void triangulate(TriangleMesh& mesh) const override {
    const int base = static_cast<int>(mesh.vertices.size());
    for (int sy = -1; sy <= 1; sy += 2)
      for (int sx = -1; sx <= 1; sx += 2) {
        mesh.vertices.push_back(R * Vec3d(sx * half.x(), sy * half.y(), 0) + t);
        mesh.vertex_parts.push_back(part);
      }
    mesh.triangles.push_back({base + 0, base + 1, base + 3});
    mesh.triangles.push_back({base + 0, base + 3, base + 2});
  }

  void sample(std::vector<SurfaceSample>& out, Scalar spacing) const override {
    const int nu = std::max(1, static_cast<int>(std::ceil(2 * half.x() / spacing)));
    const int nv = std::max(1, static_cast<int>(std::ceil(2 * half.y() / spacing)));
    for (int iu = 0; iu < nu; ++iu)
      for (int iv = 0; iv < nv; ++iv) {
        const Vec3d p(-half.x() + (iu + 0.5) * 2 * half.x() / nu,
                      -half.y() + (iv + 0.5) * 2 * half.y() / nv, 0.0);
        const Vec3d nl(0, 0, 1);
        const Vec3d n_world = R * nl;
        out.push_back({R * p + t, n_world, color_at(p, nl, n_world), part});
      }
    const Vec3d c00(-half.x(), -half.y(), 0), c10(half.x(), -half.y(), 0);
    const Vec3d c01(-half.x(), half.y(), 0), c11(half.x(), half.y(), 0);
    const Vec3d nl(0, 0, 1);
    sample_edge(out, c00, c10, nl, spacing);
    sample_edge(out, c10, c11, nl, spacing);
    sample_edge(out, c11, c01, nl, spacing);
    sample_edge(out, c01, c00, nl, spacing);
  }

  void corners(std::vector<Vec3d>& out) const override {
    for (int sy = -1; sy <= 1; sy += 2)
      for (int sx = -1; sx <= 1; sx += 2)
        out.push_back(R * Vec3d(sx * half.x(), sy * half.y(), 0) + t);
  }
};

template <typename T>
std::shared_ptr<T> make_shape(int part, const Vec3d& color, const Vec3d& position,
                              const Mat3d& R = Mat3d::Identity()) {
  auto s = std::make_shared<T>();
  s->part = part;
  s->base_color = color;
  s->t = position;
  s->R = R;
  return s;
}

}  // namespace

SceneSpec load_scene_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene spec: " + path);
  nlohmann::json j;
  in >> j;
  SceneSpec s;
  s.fixture = j.value("fixture", s.fixture);
  s.seed = j.value("seed", s.seed);
  s.resolution = j.value("resolution", s.resolution);
  s.n_candidates = j.value("n_candidates", s.n_candidates);
  s.radius = j.value("radius", s.radius);
  s.focal_factor = j.value("focal_factor", s.focal_factor);
  s.joint_state = j.value("joint_state", s.joint_state);
  return s;
}

void save_scene_json(const std::string& path, const SceneSpec& s) {
  nlohmann::json j;
  j["fixture"] = s.fixture;
  j["seed"] = s.seed;
  j["resolution"] = s.resolution;
  j["n_candidates"] = s.n_candidates;
  j["radius"] = s.radius;
  j["focal_factor"] = s.focal_factor;
  j["joint_state"] = s.joint_state;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scene spec: " + path);
  out << j.dump(2) << "\n";
}

SyntheticScene SyntheticScene::build(const SceneSpec& spec) {
  SyntheticScene scene;
  scene.spec_ = spec;

  if (spec.fixture == "hinge") {
    scene.part_names_ = {"base", "lid"};
    scene.part_parents_ = {-1, 0};
    auto base = make_shape<BoxShape>(0, Vec3d(0.78, 0.52, 0.26), Vec3d(0, 0, 0.04));
    base->half = Vec3d(0.4, 0.3, 0.04);
    auto lid = make_shape<BoxShape>(1, Vec3d(0.3, 0.5, 0.78), Vec3d(0, 0, 0.12));
    lid->half = Vec3d(0.4, 0.3, 0.04);
    scene.shapes_ = {base, lid};
    scene.joints_.push_back({"lid_hinge", 1, JointType::Revolute, Vec3d(-1, 0, 0),
                             Vec3d(0, 0.3, 0.08), Vec2d(0.0, 2.4)});
  } else if (spec.fixture == "drawer") {
    scene.part_names_ = {"cabinet", "upper_drawer", "lower_drawer"};
    scene.part_parents_ = {-1, 0, 0};
    auto cabinet = make_shape<BoxShape>(0, Vec3d(0.55, 0.58, 0.62), Vec3d(0, 0, 0.28));
    cabinet->half = Vec3d(0.35, 0.25, 0.28);
    auto lower = make_shape<BoxShape>(1, Vec3d(0.82, 0.55, 0.25), Vec3d(0, 0.35, 0.14));
    lower->half = Vec3d(0.3, 0.24, 0.1);
    auto upper = make_shape<BoxShape>(2, Vec3d(0.25, 0.6, 0.82), Vec3d(0, 0.45, 0.66));
    upper->half = Vec3d(0.3, 0.24, 0.1);
    scene.shapes_ = {cabinet, lower, upper};
    scene.joints_.push_back({"lower_slide", 1, JointType::Prismatic, Vec3d(0, 1, 0),
                             Vec3d::Zero(), Vec2d(0.0, 0.35)});
    scene.joints_.push_back({"upper_slide", 2, JointType::Prismatic, Vec3d(0, 1, 0),
                             Vec3d::Zero(), Vec2d(0.0, 0.35)});
  } else if (spec.fixture == "sphere") {
    scene.part_names_ = {"ball"};
    scene.part_parents_ = {-1};
    auto ball = make_shape<SphereShape>(0, Vec3d(0.6, 0.55, 0.8), Vec3d::Zero());
    ball->radius = 0.5;
    scene.shapes_ = {ball};
  } else if (spec.fixture == "plane") {
    scene.part_names_ = {"sheet"};
    scene.part_parents_ = {-1};
    auto sheet = make_shape<RectShape>(0, Vec3d(0.75, 0.62, 0.3), Vec3d::Zero());
    sheet->half = Vec2d(0.6, 0.5);
    scene.shapes_ = {sheet};
  } else if (spec.fixture == "plane_pair") {
    scene.part_names_ = {"lower_sheet", "upper_sheet"};
    scene.part_parents_ = {-1, 0};
    auto lower = make_shape<RectShape>(0, Vec3d(0.75, 0.62, 0.3), Vec3d::Zero());
    lower->half = Vec2d(0.55, 0.45);
    const Mat3d tilt = Eigen::AngleAxisd(0.45, Vec3d::UnitX()).toRotationMatrix();
    auto upper = make_shape<RectShape>(1, Vec3d(0.3, 0.62, 0.75), Vec3d(0.1, 0, 0.3), tilt);
    upper->half = Vec2d(0.4, 0.35);
    scene.shapes_ = {lower, upper};
    scene.joints_.push_back({"sheet_tilt", 1, JointType::Revolute, Vec3d(1, 0, 0),
                             Vec3d(0.1, 0, 0.3), Vec2d(0.0, 1.2)});
  } else {
    throw std::runtime_error("unknown fixture: " + spec.fixture);
  }

  // Pose every part at the requested joint state.
  if (spec.joint_state != 0.0) {
    for (const auto& joint : scene.joints_) {
      const Scalar state = std::clamp(spec.joint_state, joint.range[0], joint.range[1]);
      Mat3d Rw = Mat3d::Identity();
      Vec3d tw = Vec3d::Zero();
      if (joint.type == JointType::Revolute) {
        Rw = Eigen::AngleAxisd(state, joint.axis.normalized()).toRotationMatrix();
        tw = joint.pivot - Rw * joint.pivot;
      } else {
        tw = state * joint.axis.normalized();
      }
      for (auto& shape : scene.shapes_)
        if (shape->part == joint.child_part) shape->apply_world(Rw, tw);
    }
  }

  // Bounds from shape corners.
  Aabb box;
  std::vector<Vec3d> corners;
  for (const auto& shape : scene.shapes_) shape->corners(corners);
  for (const auto& c : corners) box.expand(c);
  scene.centroid_ = box.center();
  scene.extent_ = box.extent().maxCoeff();

  // Candidate poses on the upper hemisphere, facing the centroid.
  std::mt19937_64 rng = make_rng(spec.seed, "candidates");
  std::uniform_real_distribution<Scalar> u_z(0.15, 0.95);
  std::uniform_real_distribution<Scalar> u_phi(0.0, 2 * std::numbers::pi);
  const Scalar focal = spec.focal_factor * spec.resolution;
  for (int i = 0; i < spec.n_candidates; ++i) {
    const Scalar z = u_z(rng);
    const Scalar phi = u_phi(rng);
    const Scalar r = std::sqrt(1.0 - z * z);
    const Vec3d eye = scene.centroid_ +
                      spec.radius * Vec3d(r * std::cos(phi), r * std::sin(phi), z);
    Camera cam = Camera::look_at(eye, scene.centroid_, Vec3d::UnitZ(), spec.resolution,
                                 spec.resolution, focal);
    cam.id = i;
    cam.near_plane = 0.05;
    cam.far_plane = 4 * spec.radius;
    scene.candidates_.push_back(cam);
  }
  return scene;
}

int SyntheticScene::part_count() const { return static_cast<int>(part_names_.size()); }

std::optional<SyntheticScene::Hit> SyntheticScene::raycast(const Vec3d& origin,
                                                           const Vec3d& dir) const {
  std::optional<Hit> best;
  for (const auto& shape : shapes_) {
    const Vec3d o_local = shape->R.transpose() * (origin - shape->t);
    const Vec3d d_local = shape->R.transpose() * dir;
    Scalar t_hit;
    Vec3d p_local, n_local;
    if (!shape->intersect_local(o_local, d_local, t_hit, p_local, n_local)) continue;
    if (best && t_hit >= best->t) continue;
    Vec3d n_world = shape->R * n_local;
    if (n_world.dot(dir) > 0) n_world = -n_world;
    best = Hit{t_hit, n_world, shape->color_at(p_local, n_local, n_world), shape->part};
  }
  return best;
}

OracleRender SyntheticScene::render_oracle(const Camera& cam) const {
  OracleRender out;
  out.color = Image(cam.width, cam.height, 3);
  out.depth = Image(cam.width, cam.height, 1);
  out.normal = Image(cam.width, cam.height, 3);
  out.mask = Image(cam.width, cam.height, 1);
  out.part_id = Image(cam.width, cam.height, 1, -1.0);

  const Vec3d origin = cam.center();
  const Mat3d Rt = cam.R.transpose();
  const int ss = std::max(1, spec_.color_supersample);
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      // z-normalized ray: the hit parameter is the camera-space depth.
      const Vec3d dir = Rt * cam.pixel_ray(x + 0.5, y + 0.5);
      const auto hit = raycast(origin, dir);
      if (hit) {
        out.depth.at(x, y) = hit->t;
        out.normal.set_rgb(x, y, cam.R * hit->normal);
        out.mask.at(x, y) = 1.0;
        out.part_id.at(x, y) = hit->part;
      }
      // Color is box-filtered over sub-pixel rays; geometry stays
      // point-sampled at the pixel center.
      Vec3d color = Vec3d::Zero();
      for (int sy = 0; sy < ss; ++sy)
        for (int sx = 0; sx < ss; ++sx) {
          const Vec3d sdir =
              Rt * cam.pixel_ray(x + (sx + 0.5) / ss, y + (sy + 0.5) / ss);
          if (const auto shit = raycast(origin, sdir)) color += shit->color;
        }
      out.color.set_rgb(x, y, color / (ss * ss));
    }
  }
  return out;
}

std::vector<Image> SyntheticScene::part_masks(const Camera& cam) const {
  const OracleRender oracle = render_oracle(cam);
  std::vector<Image> masks(part_count(), Image(cam.width, cam.height, 1));
  for (int y = 0; y < cam.height; ++y)
    for (int x = 0; x < cam.width; ++x) {
      const int part = static_cast<int>(oracle.part_id.at(x, y));
      if (part >= 0) masks[part].at(x, y) = 1.0;
    }
  return masks;
}

TriangleMesh SyntheticScene::mesh(int part) const {
  TriangleMesh out;
  for (const auto& shape : shapes_)
    if (part < 0 || shape->part == part) shape->triangulate(out);
  return out;
}

std::vector<SurfaceSample> SyntheticScene::sample_surface(Scalar spacing,
                                                          std::uint64_t seed) const {
  std::vector<SurfaceSample> samples;
  for (const auto& shape : shapes_) shape->sample(samples, spacing);
  // Deterministic shuffle so truncated subsets stay spatially uniform.
  std::mt19937_64 rng = make_rng(seed, "surface");
  std::shuffle(samples.begin(), samples.end(), rng);
  return samples;
}

GaussianCloud cloud_from_surface(const std::vector<SurfaceSample>& samples, Scalar spacing,
                                 int part_count, Scalar opacity) {
  GaussianCloud cloud;
  cloud.part_count = part_count;
  cloud.primitives.reserve(samples.size());
  const Scalar thin = std::max(1e-4, 0.02 * spacing);
  for (const auto& s : samples) {
    GaussianPrimitive g;
    g.position = s.position;
    if (s.tangent.isZero()) {
      g.rotation = Quatd::FromTwoVectors(Vec3d::UnitZ(), s.normal).normalized();
      g.scales = Vec3d(0.5 * spacing, 0.5 * spacing, thin);
    } else {
      // Silhouette splat: x along the edge, z along the surface normal.
      Mat3d frame;
      frame.col(0) = s.tangent.normalized();
      frame.col(2) = s.normal.normalized();
      frame.col(1) = frame.col(2).cross(frame.col(0)).normalized();
      g.rotation = Quatd(frame).normalized();
      g.scales = Vec3d(s.tangent_scales[0], s.tangent_scales[1], thin);
    }
    g.opacity = opacity;
    g.color = s.color;
    g.part_probs = VecXd::Zero(part_count);
    cloud.primitives.push_back(g);
    cloud.part_ids.push_back(s.part);
  }
  return cloud;
}

}  // namespace spags

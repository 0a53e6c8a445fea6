#include "spags/camera.hpp"

#include "spags/gaussian.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace spags {

Camera Camera::scaled(Scalar factor) const {
  Camera c = *this;
  c.width = std::max(1, static_cast<int>(std::lround(width * factor)));
  c.height = std::max(1, static_cast<int>(std::lround(height * factor)));
  const Scalar sx = static_cast<Scalar>(c.width) / width;
  const Scalar sy = static_cast<Scalar>(c.height) / height;
  c.fx = fx * sx;
  c.fy = fy * sy;
  c.cx = cx * sx;
  c.cy = cy * sy;
  return c;
}

void Camera::validate() const {
  if (((R * R.transpose()) - Mat3d::Identity()).cwiseAbs().maxCoeff() > 1e-6)
    throw ValidationError("camera rotation is not orthonormal");
  if (!(near_plane > 0 && near_plane < far_plane))
    throw ValidationError("camera requires 0 < near < far");
  if (width <= 0 || height <= 0 || fx <= 0 || fy <= 0)
    throw ValidationError("camera resolution/focal must be positive");
}

Camera Camera::look_at(const Vec3d& eye, const Vec3d& target, const Vec3d& up,
                       int width, int height, Scalar focal) {
  Vec3d forward = (target - eye).normalized();
  Vec3d hint = up;
  if (std::abs(forward.dot(hint.normalized())) > 0.999) hint = Vec3d(1, 0, 0);
  const Vec3d right = forward.cross(hint).normalized();
  const Vec3d down = forward.cross(right);  // +y goes down in pixel space

  Camera cam;
  cam.width = width;
  cam.height = height;
  cam.fx = cam.fy = focal;
  cam.cx = width / 2.0;
  cam.cy = height / 2.0;
  cam.R.row(0) = right.transpose();
  cam.R.row(1) = down.transpose();
  cam.R.row(2) = forward.transpose();
  cam.t = -cam.R * eye;
  return cam;
}

std::vector<Camera> load_cameras_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open camera file: " + path);
  nlohmann::json j;
  in >> j;
  std::vector<Camera> cams;
  cams.reserve(j.size());
  for (const auto& e : j) {
    Camera c;
    c.id = e.at("id").get<int>();
    c.width = e.at("width").get<int>();
    c.height = e.at("height").get<int>();
    c.fx = e.at("fx").get<Scalar>();
    c.fy = e.at("fy").get<Scalar>();
    c.cx = e.at("cx").get<Scalar>();
    c.cy = e.at("cy").get<Scalar>();
    const auto& r = e.at("R");
    if (r.size() != 9) throw std::runtime_error("camera R must hold 9 floats");
    for (int k = 0; k < 9; ++k) c.R(k / 3, k % 3) = r[k].get<Scalar>();
    const auto& t = e.at("t");
    for (int k = 0; k < 3; ++k) c.t[k] = t[k].get<Scalar>();
    if (e.contains("near")) c.near_plane = e["near"].get<Scalar>();
    if (e.contains("far")) c.far_plane = e["far"].get<Scalar>();
    cams.push_back(c);
  }
  return cams;
}

void save_cameras_json(const std::string& path, const std::vector<Camera>& cams) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : cams) {
    nlohmann::json e;
    e["id"] = c.id;
    e["width"] = c.width;
    e["height"] = c.height;
    e["fx"] = c.fx;
    e["fy"] = c.fy;
    e["cx"] = c.cx;
    e["cy"] = c.cy;
    std::vector<Scalar> r(9);
    for (int k = 0; k < 9; ++k) r[k] = c.R(k / 3, k % 3);
    e["R"] = r;
    e["t"] = {c.t.x(), c.t.y(), c.t.z()};
    e["near"] = c.near_plane;
    e["far"] = c.far_plane;
    j.push_back(e);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write camera file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace spags

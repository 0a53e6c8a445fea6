#include "spags/ply_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spags {

namespace {

Scalar logit(Scalar p) {
  const Scalar eps = 1e-7;
  p = std::clamp(p, eps, 1.0 - eps);
  return std::log(p / (1.0 - p));
}

Scalar sigmoid(Scalar x) { return 1.0 / (1.0 + std::exp(-x)); }

void write_f32(std::ostream& out, Scalar v) {
  const float f = static_cast<float>(v);
  out.write(reinterpret_cast<const char*>(&f), sizeof(f));
}

struct PlyHeader {
  std::size_t vertex_count = 0;
  std::vector<std::string> properties;  // in declaration order
  std::vector<char> types;              // 'f' float32, 'i' int32
};

PlyHeader read_header(std::istream& in, const std::string& path) {
  std::string line;
  std::getline(in, line);
  if (line != "ply") throw std::runtime_error("not a PLY file: " + path);
  PlyHeader h;
  bool in_vertex = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt != "binary_little_endian")
        throw std::runtime_error("only binary_little_endian PLY supported: " + path);
    } else if (tok == "element") {
      std::string name;
      std::size_t n;
      ls >> name >> n;
      in_vertex = (name == "vertex");
      if (in_vertex) h.vertex_count = n;
    } else if (tok == "property" && in_vertex) {
      std::string type, name;
      ls >> type >> name;
      if (type == "float" || type == "float32")
        h.types.push_back('f');
      else if (type == "int" || type == "int32")
        h.types.push_back('i');
      else
        throw std::runtime_error("unsupported PLY property type " + type + " in " + path);
      h.properties.push_back(name);
    } else if (tok == "end_header") {
      return h;
    }
  }
  throw std::runtime_error("truncated PLY header: " + path);
}

}  // namespace

void save_cloud_ply(const std::string& path, const GaussianCloud& cloud) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);

  const bool with_parts = !cloud.part_ids.empty();
  out << "ply\nformat binary_little_endian 1.0\n";
  out << "comment part_count " << cloud.part_count << "\n";
  out << "element vertex " << cloud.size() << "\n";
  const char* base[] = {"x", "y", "z", "rot_w", "rot_x", "rot_y", "rot_z",
                        "scale_x", "scale_y", "scale_z", "opacity",
                        "red", "green", "blue", "reliability"};
  for (const char* p : base) out << "property float " << p << "\n";
  for (int q = 0; q < cloud.part_count; ++q)
    out << "property float part_prob_" << q << "\n";
  if (with_parts) out << "property int part_id\n";
  out << "end_header\n";

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& g = cloud.primitives[i];
    for (int k = 0; k < 3; ++k) write_f32(out, g.position[k]);
    write_f32(out, g.rotation.w());
    write_f32(out, g.rotation.x());
    write_f32(out, g.rotation.y());
    write_f32(out, g.rotation.z());
    for (int k = 0; k < 3; ++k) write_f32(out, std::log(g.scales[k]));
    write_f32(out, logit(g.opacity));
    for (int k = 0; k < 3; ++k) write_f32(out, g.color[k]);
    write_f32(out, g.reliability);
    for (int q = 0; q < cloud.part_count; ++q)
      write_f32(out, q < g.part_probs.size() ? g.part_probs[q] : 0.0);
    if (with_parts) {
      const std::int32_t pid = cloud.part_ids[i];
      out.write(reinterpret_cast<const char*>(&pid), sizeof(pid));
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

GaussianCloud load_cloud_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  const PlyHeader h = read_header(in, path);

  auto index_of = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < h.properties.size(); ++i)
      if (h.properties[i] == name) return static_cast<int>(i);
    return -1;
  };
  const char* required[] = {"x", "y", "z", "rot_w", "rot_x", "rot_y", "rot_z",
                            "scale_x", "scale_y", "scale_z", "opacity",
                            "red", "green", "blue"};
  for (const char* p : required)
    if (index_of(p) < 0) throw std::runtime_error(std::string("PLY misses property ") + p);

  int part_count = 0;
  while (index_of("part_prob_" + std::to_string(part_count)) >= 0) ++part_count;
  const int rel_idx = index_of("reliability");
  const int pid_idx = index_of("part_id");

  GaussianCloud cloud;
  cloud.part_count = std::max(1, part_count);
  cloud.primitives.resize(h.vertex_count);
  if (pid_idx >= 0) cloud.part_ids.assign(h.vertex_count, -1);

  const std::size_t stride = h.properties.size();
  std::vector<float> rowf(stride);
  for (std::size_t i = 0; i < h.vertex_count; ++i) {
    in.read(reinterpret_cast<char*>(rowf.data()),
            static_cast<std::streamsize>(stride * sizeof(float)));
    if (!in) throw std::runtime_error("truncated PLY body: " + path);
    auto get = [&](const char* name) { return static_cast<Scalar>(rowf[index_of(name)]); };

    auto& g = cloud.primitives[i];
    g.position = {get("x"), get("y"), get("z")};
    g.rotation = Quatd(get("rot_w"), get("rot_x"), get("rot_y"), get("rot_z")).normalized();
    g.scales = {std::exp(get("scale_x")), std::exp(get("scale_y")), std::exp(get("scale_z"))};
    g.opacity = sigmoid(get("opacity"));
    g.color = {get("red"), get("green"), get("blue")};
    if (rel_idx >= 0) {
      g.reliability = std::clamp<Scalar>(rowf[rel_idx], 1e-12, 1.0);
      g.potential = -std::log(g.reliability);
      g.reliability = std::exp(-g.potential);
    }
    if (part_count > 0) {
      g.part_probs.resize(part_count);
      for (int q = 0; q < part_count; ++q)
        g.part_probs[q] = rowf[index_of("part_prob_" + std::to_string(q))];
    }
    if (pid_idx >= 0)
      std::memcpy(&cloud.part_ids[i], &rowf[pid_idx], sizeof(std::int32_t));
  }
  return cloud;
}

std::vector<Vec3d> load_points_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  const PlyHeader h = read_header(in, path);
  if (h.properties.size() < 3 || h.properties[0] != "x" || h.properties[1] != "y" ||
      h.properties[2] != "z")
    throw std::runtime_error("PLY vertex element must start with x y z: " + path);

  std::vector<Vec3d> points(h.vertex_count);
  std::vector<float> rowf(h.properties.size());
  for (auto& p : points) {
    in.read(reinterpret_cast<char*>(rowf.data()),
            static_cast<std::streamsize>(rowf.size() * sizeof(float)));
    if (!in) throw std::runtime_error("truncated PLY body: " + path);
    p = {rowf[0], rowf[1], rowf[2]};
  }
  return points;
}

void save_points_ply(const std::string& path, const std::vector<Vec3d>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << "ply\nformat binary_little_endian 1.0\nelement vertex " << points.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  for (const auto& p : points)
    for (int k = 0; k < 3; ++k) write_f32(out, p[k]);
}

}  // namespace spags

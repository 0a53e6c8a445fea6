#include "spags/mesh.hpp"

#include "spags/rng.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace spags {

namespace {

Scalar triangle_area(const Vec3d& a, const Vec3d& b, const Vec3d& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace

Scalar TriangleMesh::area() const {
  Scalar total = 0;
  for (const auto& t : triangles)
    total += triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
  return total;
}

void TriangleMesh::remove_degenerate(Scalar min_area) {
  std::vector<std::array<int, 3>> kept;
  kept.reserve(triangles.size());
  for (const auto& t : triangles)
    if (triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) > min_area)
      kept.push_back(t);
  triangles.swap(kept);

  std::vector<int> remap(vertices.size(), -1);
  std::vector<Vec3d> new_vertices;
  std::vector<int> new_parts;
  std::vector<Vec3d> new_colors;
  for (auto& t : triangles) {
    for (int& v : t) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(new_vertices.size());
        new_vertices.push_back(vertices[v]);
        if (!vertex_parts.empty()) new_parts.push_back(vertex_parts[v]);
        if (!vertex_colors.empty()) new_colors.push_back(vertex_colors[v]);
      }
      v = remap[v];
    }
  }
  vertices.swap(new_vertices);
  vertex_parts.swap(new_parts);
  vertex_colors.swap(new_colors);
}

void TriangleMesh::append(const TriangleMesh& other, int part_id) {
  const int base = static_cast<int>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  for (const auto& t : other.triangles)
    triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  for (std::size_t i = 0; i < other.vertices.size(); ++i) {
    vertex_parts.push_back(part_id >= 0
                               ? part_id
                               : (i < other.vertex_parts.size() ? other.vertex_parts[i] : 0));
    if (!other.vertex_colors.empty()) vertex_colors.push_back(other.vertex_colors[i]);
  }
}

std::vector<Vec3d> sample_mesh_surface(const TriangleMesh& mesh, int count,
                                       std::uint64_t seed) {
  std::vector<Vec3d> out;
  if (mesh.empty() || count <= 0) return out;

  std::vector<Scalar> cumulative(mesh.triangles.size());
  Scalar total = 0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    total += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    cumulative[i] = total;
  }
  if (total <= 0) return out;

  std::mt19937_64 rng = make_rng(seed, "meshsample");
  std::uniform_real_distribution<Scalar> uni(0.0, 1.0);
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const Scalar pick = uni(rng) * total;
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), pick);
    const auto& t = mesh.triangles[it - cumulative.begin()];
    Scalar u = uni(rng), v = uni(rng);
    if (u + v > 1) {
      u = 1 - u;
      v = 1 - v;
    }
    out.push_back(mesh.vertices[t[0]] + u * (mesh.vertices[t[1]] - mesh.vertices[t[0]]) +
                  v * (mesh.vertices[t[2]] - mesh.vertices[t[0]]));
  }
  return out;
}

void save_mesh_obj(const std::string& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const auto& v = mesh.vertices[i];
    out << "v " << v.x() << " " << v.y() << " " << v.z();
    if (i < mesh.vertex_colors.size()) {
      const auto& c = mesh.vertex_colors[i];
      out << " " << c.x() << " " << c.y() << " " << c.z();
    }
    out << "\n";
  }
  if (mesh.vertex_parts.empty()) {
    for (const auto& t : mesh.triangles)
      out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  } else {
    // Group faces by the majority part of their vertices.
    std::map<int, std::vector<const std::array<int, 3>*>> groups;
    for (const auto& t : mesh.triangles) groups[mesh.vertex_parts[t[0]]].push_back(&t);
    for (const auto& [part, faces] : groups) {
      out << "usemtl part_" << part << "\n";
      for (const auto* t : faces)
        out << "f " << (*t)[0] + 1 << " " << (*t)[1] + 1 << " " << (*t)[2] + 1 << "\n";
    }
  }
}

void save_mesh_ply(const std::string& path, const TriangleMesh& mesh) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  const bool parts = !mesh.vertex_parts.empty();
  const bool colors = !mesh.vertex_colors.empty();
  out << "ply\nformat binary_little_endian 1.0\nelement vertex " << mesh.vertices.size()
      << "\nproperty float x\nproperty float y\nproperty float z\n";
  if (colors) out << "property float red\nproperty float green\nproperty float blue\n";
  if (parts) out << "property int part_id\n";
  out << "element face " << mesh.triangles.size()
      << "\nproperty list uchar int vertex_indices\nend_header\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const float f = static_cast<float>(mesh.vertices[i][k]);
      out.write(reinterpret_cast<const char*>(&f), sizeof(f));
    }
    if (colors)
      for (int k = 0; k < 3; ++k) {
        const float f = static_cast<float>(mesh.vertex_colors[i][k]);
        out.write(reinterpret_cast<const char*>(&f), sizeof(f));
      }
    if (parts) {
      const std::int32_t p = mesh.vertex_parts[i];
      out.write(reinterpret_cast<const char*>(&p), sizeof(p));
    }
  }
  for (const auto& t : mesh.triangles) {
    const unsigned char n = 3;
    out.write(reinterpret_cast<const char*>(&n), 1);
    for (int k = 0; k < 3; ++k) {
      const std::int32_t idx = t[k];
      out.write(reinterpret_cast<const char*>(&idx), sizeof(idx));
    }
  }
}

TriangleMesh load_mesh_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  TriangleMesh mesh;
  int current_part = -1;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "v") {
      Vec3d v;
      ls >> v.x() >> v.y() >> v.z();
      mesh.vertices.push_back(v);
      if (current_part >= 0) mesh.vertex_parts.resize(mesh.vertices.size(), current_part);
    } else if (tok == "usemtl") {
      std::string name;
      ls >> name;
      if (name.rfind("part_", 0) == 0) current_part = std::stoi(name.substr(5));
    } else if (tok == "f") {
      std::array<int, 3> t;
      for (int k = 0; k < 3; ++k) {
        std::string v;
        ls >> v;
        t[k] = std::stoi(v.substr(0, v.find('/'))) - 1;
      }
      mesh.triangles.push_back(t);
      if (current_part >= 0) {
        mesh.vertex_parts.resize(mesh.vertices.size(), 0);
        for (int k = 0; k < 3; ++k) mesh.vertex_parts[t[k]] = current_part;
      }
    }
  }
  return mesh;
}

}  // namespace spags

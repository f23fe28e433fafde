#include "blastvox/geometry/mesh.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

#include "blastvox/errors.hpp"

namespace blastvox {

namespace {

std::uint64_t edgeKey(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 32) | b;
}

}  // namespace

double TriangleMesh::area(std::size_t t) const {
  const auto& tri = triangles[t];
  return 0.5 * (vertices[tri[1]] - vertices[tri[0]]).cross(vertices[tri[2]] - vertices[tri[0]]).norm();
}

Vec3 TriangleMesh::normal(std::size_t t) const {
  const auto& tri = triangles[t];
  const Vec3 n = (vertices[tri[1]] - vertices[tri[0]]).cross(vertices[tri[2]] - vertices[tri[0]]);
  const double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

Vec3 TriangleMesh::centroid(std::size_t t) const {
  const auto& tri = triangles[t];
  return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

double TriangleMesh::signedVolume() const {
  if (vertices.empty()) return 0.0;
  // Relative to the first vertex to limit cancellation far from the origin.
  const Vec3 ref = vertices.front();
  double six_v = 0.0;
  for (const auto& tri : triangles) {
    const Vec3 a = vertices[tri[0]] - ref;
    const Vec3 b = vertices[tri[1]] - ref;
    const Vec3 c = vertices[tri[2]] - ref;
    six_v += a.dot(b.cross(c));
  }
  return six_v / 6.0;
}

double TriangleMesh::surfaceArea() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += area(t);
  return a;
}

double TriangleMesh::maxEdgeLength() const {
  double m = 0.0;
  for (const auto& tri : triangles) {
    for (int e = 0; e < 3; ++e) {
      m = std::max(m, (vertices[tri[e]] - vertices[tri[(e + 1) % 3]]).norm());
    }
  }
  return m;
}

Aabb TriangleMesh::bounds() const {
  Aabb box;
  for (const Vec3& v : vertices) box.extend(v);
  return box;
}

void TriangleMesh::validateManifold() const {
  if (triangles.empty()) throw ConfigError("mesh has no triangles");
  std::map<std::uint64_t, int> uses;
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (int e = 0; e < 3; ++e) {
      const std::uint32_t a = tri[e];
      const std::uint32_t b = tri[(e + 1) % 3];
      if (a >= vertices.size() || b >= vertices.size()) {
        throw ConfigError("triangle " + std::to_string(t) + " references a missing vertex");
      }
      if (a == b) throw ConfigError("triangle " + std::to_string(t) + " repeats vertex " + std::to_string(a));
      ++uses[edgeKey(a, b)];
      ++directed[{a, b}];
    }
  }
  for (const auto& [key, count] : uses) {
    if (count != 2) {
      const auto a = static_cast<std::uint32_t>(key >> 32);
      const auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
      throw ConfigError("non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) + ") shared by " +
                        std::to_string(count) + " triangle(s)");
    }
  }
  for (const auto& [edge, count] : directed) {
    if (count != 1) {
      throw ConfigError("inconsistent winding at edge (" + std::to_string(edge.first) + ", " +
                        std::to_string(edge.second) + ")");
    }
  }
}

TriangleMesh TriangleMesh::transformed(const Quat& rotation, const Vec3& translation) const {
  TriangleMesh out = *this;
  const Mat3 r = rotation.toRotationMatrix();
  for (Vec3& v : out.vertices) v = r * v + translation;
  return out;
}

TriangleMesh TriangleMesh::translated(const Vec3& t) const {
  TriangleMesh out = *this;
  for (Vec3& v : out.vertices) v += t;
  return out;
}

TriangleMesh TriangleMesh::scaled(double s, const Vec3& pivot) const {
  TriangleMesh out = *this;
  for (Vec3& v : out.vertices) v = pivot + s * (v - pivot);
  return out;
}

TriangleMesh TriangleMesh::subdivided(double max_edge) const {
  TriangleMesh cur = *this;
  if (max_edge <= 0.0) return cur;
  while (cur.maxEdgeLength() >= max_edge) {
    TriangleMesh next;
    next.vertices = cur.vertices;
    std::unordered_map<std::uint64_t, std::uint32_t> mid;
    const auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = edgeKey(a, b);
      const auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      const auto idx = static_cast<std::uint32_t>(next.vertices.size());
      next.vertices.push_back(0.5 * (cur.vertices[a] + cur.vertices[b]));
      mid.emplace(key, idx);
      return idx;
    };
    next.triangles.reserve(cur.triangles.size() * 4);
    for (const auto& t : cur.triangles) {
      const std::uint32_t ab = midpoint(t[0], t[1]);
      const std::uint32_t bc = midpoint(t[1], t[2]);
      const std::uint32_t ca = midpoint(t[2], t[0]);
      next.triangles.push_back({t[0], ab, ca});
      next.triangles.push_back({ab, t[1], bc});
      next.triangles.push_back({ca, bc, t[2]});
      next.triangles.push_back({ab, bc, ca});
    }
    cur = std::move(next);
  }
  return cur;
}

void TriangleMesh::append(const TriangleMesh& other) {
  const auto base = static_cast<std::uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  for (const auto& t : other.triangles) triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
}

}  // namespace blastvox

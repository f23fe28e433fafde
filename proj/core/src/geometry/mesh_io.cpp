#include "blastvox/geometry/mesh_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "blastvox/errors.hpp"

namespace blastvox {

namespace {

std::string_view nextToken(std::string_view& line) {
  std::size_t b = line.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    line = {};
    return {};
  }
  std::size_t e = line.find_first_of(" \t\r", b);
  if (e == std::string_view::npos) e = line.size();
  const std::string_view tok = line.substr(b, e - b);
  line.remove_prefix(e);
  return tok;
}

template <class T>
T parseNumber(std::string_view tok, const std::string& where) {
  T value{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ConfigError(where + ": bad number '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

std::string formatDouble(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

TriangleMesh parseMesh(std::istream& in, const std::string& source) {
  TriangleMesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest = line;
    const std::string_view tag = nextToken(rest);
    if (tag.empty() || tag.front() == '#') continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (tag == "v") {
      Vec3 p;
      for (int i = 0; i < 3; ++i) p[i] = parseNumber<double>(nextToken(rest), where);
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      Triangle t;
      for (int i = 0; i < 3; ++i) {
        const long idx = parseNumber<long>(nextToken(rest), where);
        if (idx < 1) throw ConfigError(where + ": vertex indices are 1-based");
        t[i] = static_cast<std::uint32_t>(idx - 1);
      }
      mesh.triangles.push_back(t);
    } else {
      throw ConfigError(where + ": unknown record '" + std::string(tag) + "'");
    }
    if (!nextToken(rest).empty()) throw ConfigError(where + ": trailing data");
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (const std::uint32_t v : mesh.triangles[t]) {
      if (v >= mesh.vertices.size()) {
        throw ConfigError(source + ": triangle " + std::to_string(t + 1) + " references vertex " +
                          std::to_string(v + 1) + " of " + std::to_string(mesh.vertices.size()));
      }
    }
  }
  return mesh;
}

void formatMesh(std::ostream& out, const TriangleMesh& mesh) {
  for (const Vec3& v : mesh.vertices) {
    out << "v " << formatDouble(v.x()) << ' ' << formatDouble(v.y()) << ' ' << formatDouble(v.z()) << '\n';
  }
  for (const Triangle& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

TriangleMesh readMesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file " + path.string());
  return parseMesh(in, path.string());
}

void writeMesh(const std::filesystem::path& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write mesh file " + path.string());
  formatMesh(out, mesh);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace blastvox

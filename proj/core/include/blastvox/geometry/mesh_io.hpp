#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "blastvox/geometry/mesh.hpp"

namespace blastvox {

/// Plain-text mesh format, one record per line:
///   v <x> <y> <z>     vertex position in metres
///   f <a> <b> <c>     triangle, 1-based vertex indices, counter-clockwise
///                     seen from outside
/// Blank lines and lines starting with '#' are ignored. Coordinates are
/// written in shortest round-trip form, so write-then-read is bit-exact.
TriangleMesh parseMesh(std::istream& in, const std::string& source = "<stream>");
void formatMesh(std::ostream& out, const TriangleMesh& mesh);

/// Throws IoError when the file cannot be opened, ConfigError on a
/// malformed record.
TriangleMesh readMesh(const std::filesystem::path& path);
void writeMesh(const std::filesystem::path& path, const TriangleMesh& mesh);

/// Shortest decimal text that parses back to exactly `x`.
std::string formatDouble(double x);

}  // namespace blastvox

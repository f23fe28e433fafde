#include "blastvox/coupling/force_export.hpp"

#include <bit>
#include <cstring>
#include <sstream>

#include "blastvox/errors.hpp"

namespace blastvox {

namespace {

static_assert(std::endian::native == std::endian::little, "record encoding assumes a little-endian host");

template <class T>
void put(char*& p, T v) {
  std::memcpy(p, &v, sizeof v);
  p += sizeof v;
}

template <class T>
T get(const char*& p) {
  T v;
  std::memcpy(&v, p, sizeof v);
  p += sizeof v;
  return v;
}

}  // namespace

ForceExportWriter::ForceExportWriter(const std::filesystem::path& path, const std::string& body,
                                     std::size_t triangles, bool append)
    : triangles_(triangles) {
  const bool exists = append && std::filesystem::exists(path);
  out_.open(path, std::ios::binary | (exists ? std::ios::app : std::ios::trunc));
  if (!out_) throw IoError("cannot open force export " + path.string());
  if (!exists) {
    out_ << "blastvox-forces 1\n"
         << "body " << body << '\n'
         << "triangles " << triangles << '\n'
         << "record f64 time, u32 triangle, f64 fx, f64 fy, f64 fz (little-endian)\n"
         << "end\n";
  }
}

void ForceExportWriter::write(double time, std::span<const Vec3> forces) {
  if (forces.size() != triangles_) throw std::invalid_argument("force export: triangle count mismatch");
  std::vector<char> buf(forces.size() * kForceRecordBytes);
  char* p = buf.data();
  for (std::size_t t = 0; t < forces.size(); ++t) {
    put(p, time);
    put(p, static_cast<std::uint32_t>(t));
    put(p, forces[t].x());
    put(p, forces[t].y());
    put(p, forces[t].z());
  }
  out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out_) throw IoError("force export write failed");
}

void ForceExportWriter::flush() { out_.flush(); }

ForceSeries readForceExport(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open force export " + path.string());
  ForceSeries s;
  std::string line;
  if (!std::getline(in, line) || line != "blastvox-forces 1") throw IoError(path.string() + ": not a force export");
  while (std::getline(in, line) && line != "end") {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "body") ls >> s.body;
    else if (key == "triangles") ls >> s.triangles;
  }
  if (line != "end") throw IoError(path.string() + ": truncated header");
  const std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (payload.size() % kForceRecordBytes != 0) throw IoError(path.string() + ": truncated record");
  const char* p = payload.data();
  const std::size_t n = payload.size() / kForceRecordBytes;
  s.records.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ForceRecord& r = s.records[i];
    r.time = get<double>(p);
    r.triangle = get<std::uint32_t>(p);
    r.force.x() = get<double>(p);
    r.force.y() = get<double>(p);
    r.force.z() = get<double>(p);
  }
  return s;
}

}  // namespace blastvox

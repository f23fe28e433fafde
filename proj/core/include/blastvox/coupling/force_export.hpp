#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "blastvox/types.hpp"

namespace blastvox {

/// Per-triangle force time series for an external structural solver.
///
/// The file starts with a text header terminated by the line "end":
///   blastvox-forces 1
///   body <name>
///   triangles <count>
///   record f64 time, u32 triangle, f64 fx, f64 fy, f64 fz (little-endian)
///   end
/// followed by fixed 36-byte records, one per triangle per exported step.
class ForceExportWriter {
 public:
  ForceExportWriter() = default;
  ForceExportWriter(const std::filesystem::path& path, const std::string& body, std::size_t triangles,
                    bool append = false);

  bool isOpen() const { return out_.is_open(); }
  /// Appends one record per triangle. Throws IoError on failure.
  void write(double time, std::span<const Vec3> forces);
  void flush();

 private:
  std::ofstream out_;
  std::size_t triangles_ = 0;
};

struct ForceRecord {
  double time = 0.0;
  std::uint32_t triangle = 0;
  Vec3 force = Vec3::Zero();
};

struct ForceSeries {
  std::string body;
  std::size_t triangles = 0;
  std::vector<ForceRecord> records;
};

ForceSeries readForceExport(const std::filesystem::path& path);

inline constexpr std::size_t kForceRecordBytes = 36;

}  // namespace blastvox

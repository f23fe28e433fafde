#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "blastvox/effects/splat.hpp"

namespace blastvox {

/// 8-bit RGB raster, row major from the top-left pixel.
struct Image8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image8() = default;
  Image8(int w, int h) : width(w), height(h), rgb(std::size_t(w) * h * 3, 0) {}
  std::uint8_t* pixel(int x, int y) { return rgb.data() + (std::size_t(y) * width + x) * 3; }
  const std::uint8_t* pixel(int x, int y) const { return rgb.data() + (std::size_t(y) * width + x) * 3; }
};

using ImageMetadata = std::map<std::string, std::string>;

/// PNG bytes with each metadata entry stored as a tEXt chunk. Encoding is
/// a pure function of its inputs.
std::vector<std::uint8_t> encodePng(const Image8& image, const ImageMetadata& metadata = {});
void writePng(const std::filesystem::path& path, const Image8& image, const ImageMetadata& metadata = {});

struct DecodedPng {
  Image8 image;
  ImageMetadata metadata;
};
DecodedPng readPng(const std::filesystem::path& path);

/// Float RGBA to 8-bit RGB, clamped, composited over black.
Image8 toImage8(const RgbaImage& image);

}  // namespace blastvox

#pragma once

#include <span>
#include <vector>

#include "blastvox/effects/blackbody.hpp"
#include "blastvox/effects/camera.hpp"

namespace blastvox {

/// Floating-point RGBA raster, row major from the top-left pixel.
struct RgbaImage {
  int width = 0;
  int height = 0;
  std::vector<Rgba> pixels;

  RgbaImage() = default;
  RgbaImage(int w, int h, Rgba fill = {0.0, 0.0, 0.0, 1.0}) : width(w), height(h), pixels(std::size_t(w) * h, fill) {}
  Rgba& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
  const Rgba& at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
};

struct SplatParticle {
  Vec3 position = Vec3::Zero();
  Rgba color;
  double radius = 0.1;  // world-space standard deviation of the blob, m
};

/// Composites particles as 2D Gaussian footprints, farthest first, with
/// "over" alpha blending onto `background`.
RgbaImage splatParticles(std::span<const SplatParticle> particles, const Camera& camera,
                         const RgbaImage& background);

}  // namespace blastvox

#include "blastvox/effects/splat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace blastvox {

RgbaImage splatParticles(std::span<const SplatParticle> particles, const Camera& camera,
                         const RgbaImage& background) {
  RgbaImage img = background;
  struct Item {
    std::size_t index;
    Camera::Projection proj;
  };
  std::vector<Item> items;
  items.reserve(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (const auto pr = camera.project(particles[i].position)) items.push_back({i, *pr});
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.proj.depth > b.proj.depth; });
  const double focal = camera.focalPixels();
  for (const Item& it : items) {
    const SplatParticle& p = particles[it.index];
    const double sigma = std::max(0.5, p.radius * focal / it.proj.depth);
    const int reach = static_cast<int>(std::ceil(3.0 * sigma));
    const int cx = static_cast<int>(std::lround(it.proj.x));
    const int cy = static_cast<int>(std::lround(it.proj.y));
    for (int y = std::max(0, cy - reach); y <= std::min(img.height - 1, cy + reach); ++y) {
      for (int x = std::max(0, cx - reach); x <= std::min(img.width - 1, cx + reach); ++x) {
        const double dx = x - it.proj.x;
        const double dy = y - it.proj.y;
        const double a = p.color.a * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        if (a <= 0.0) continue;
        Rgba& dst = img.at(x, y);
        dst.r = a * p.color.r + (1.0 - a) * dst.r;
        dst.g = a * p.color.g + (1.0 - a) * dst.g;
        dst.b = a * p.color.b + (1.0 - a) * dst.b;
        dst.a = a + (1.0 - a) * dst.a;
      }
    }
  }
  return img;
}

}  // namespace blastvox

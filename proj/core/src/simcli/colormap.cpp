#include "blastvox/simcli/colormap.hpp"

#include <algorithm>
#include <cmath>

#include "blastvox/errors.hpp"

namespace blastvox {

Colormap parseColormap(const std::string& name) {
  if (name == "hot") return Colormap::hot;
  if (name == "gray" || name == "grey") return Colormap::gray;
  throw ConfigError("unknown colormap '" + name + "' (expected hot or gray)");
}

const char* colormapName(Colormap c) { return c == Colormap::hot ? "hot" : "gray"; }

std::array<std::uint8_t, 3> mapColor(Colormap c, double t) {
  if (!(t >= 0.0)) t = 0.0;  // also catches NaN
  t = std::min(t, 1.0);
  const auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  if (c == Colormap::gray) return {q(t), q(t), q(t)};
  const double r = t / 0.375;
  const double g = (t - 0.375) / 0.375;
  const double b = (t - 0.75) / 0.25;
  return {q(r), q(g), q(b)};
}

}  // namespace blastvox

#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace blastvox {

/// Colour ramps for slice export. Both take t in [0, 1] (clamped):
///   hot:  black -> red -> yellow -> white, the red channel rising over
///         [0, 3/8], green over [3/8, 3/4], blue over [3/4, 1]
///   gray: linear black -> white
enum class Colormap { hot, gray };

Colormap parseColormap(const std::string& name);
const char* colormapName(Colormap c);
std::array<std::uint8_t, 3> mapColor(Colormap c, double t);

}  // namespace blastvox

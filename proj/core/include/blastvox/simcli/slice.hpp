#pragma once

#include <optional>
#include <string>

#include "blastvox/simcli/colormap.hpp"
#include "blastvox/simcli/image.hpp"
#include "blastvox/simcli/snapshot.hpp"

namespace blastvox {

struct SliceOptions {
  int axis = 2;            // normal axis: 0 = x, 1 = y, 2 = z
  int index = 0;           // voxel layer along that axis
  std::string field = "P";
  Colormap colormap = Colormap::hot;
  std::optional<double> min;  // default: field minimum over the snapshot
  std::optional<double> max;  // default: field maximum over the snapshot
};

struct SliceImage {
  Image8 image;
  ImageMetadata metadata;  // field, axis, index, min, max, colormap, time, step
};

/// Colour used for fully solid voxels.
inline constexpr std::array<std::uint8_t, 3> kSolidColor{0, 64, 128};

/// One voxel layer as an image, one pixel per voxel. The in-plane axes are
/// the remaining two in increasing order, the first running left to right
/// and the second bottom to top. t = (value - min) / (max - min) goes
/// through the colormap; min == max maps everything to t = 0. Throws
/// ConfigError for an out-of-range axis or index or an unknown field.
SliceImage exportSlice(const Snapshot& snap, const SliceOptions& options);

}  // namespace blastvox

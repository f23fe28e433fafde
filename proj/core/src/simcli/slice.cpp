#include "blastvox/simcli/slice.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "blastvox/errors.hpp"

namespace blastvox {

namespace {

std::string exact(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

SliceImage exportSlice(const Snapshot& snap, const SliceOptions& o) {
  if (o.axis < 0 || o.axis > 2) throw ConfigError("slice axis must be 0, 1 or 2");
  const GridDims& d = snap.dims;
  if (o.index < 0 || o.index >= d[o.axis]) {
    throw ConfigError("slice index " + std::to_string(o.index) + " outside [0, " + std::to_string(d[o.axis] - 1) +
                      "] along axis " + std::to_string(o.axis));
  }
  fieldValue(VoxelState{}, o.field);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  if (!o.min || !o.max) {
    for (const VoxelState& c : snap.cells) {
      if (c.partial_volume <= 0.0) continue;
      const double v = fieldValue(c, o.field);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo > hi) lo = hi = 0.0;
  }
  if (o.min) lo = *o.min;
  if (o.max) hi = *o.max;

  const int ua = o.axis == 0 ? 1 : 0;
  const int va = o.axis == 2 ? 1 : 2;
  SliceImage out;
  out.image = Image8(d[ua], d[va]);
  for (int v = 0; v < d[va]; ++v) {
    for (int u = 0; u < d[ua]; ++u) {
      int c[3];
      c[o.axis] = o.index;
      c[ua] = u;
      c[va] = v;
      const VoxelState& cell = snap.cells[d.index(c[0], c[1], c[2])];
      std::array<std::uint8_t, 3> rgb = kSolidColor;
      if (cell.partial_volume > 0.0) {
        const double t = hi > lo ? (fieldValue(cell, o.field) - lo) / (hi - lo) : 0.0;
        rgb = mapColor(o.colormap, t);
      }
      std::uint8_t* px = out.image.pixel(u, d[va] - 1 - v);
      px[0] = rgb[0];
      px[1] = rgb[1];
      px[2] = rgb[2];
    }
  }
  const char* axes = "xyz";
  out.metadata["field"] = o.field;
  out.metadata["axis"] = std::string(1, axes[o.axis]);
  out.metadata["index"] = std::to_string(o.index);
  out.metadata["min"] = exact(lo);
  out.metadata["max"] = exact(hi);
  out.metadata["colormap"] = colormapName(o.colormap);
  out.metadata["time"] = exact(snap.time);
  out.metadata["step"] = std::to_string(snap.step);
  return out;
}

}  // namespace blastvox

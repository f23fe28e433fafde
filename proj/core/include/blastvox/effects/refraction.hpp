#pragma once

#include <optional>
#include <span>
#include <vector>

#include "blastvox/fluidcore/fluid_grid.hpp"

namespace blastvox {

/// Cell-centred scalar field on a voxel lattice (typically density).
struct ScalarVolume {
  GridDims dims;
  double h = 1.0;
  Vec3 origin = Vec3::Zero();
  std::vector<double> values;

  static ScalarVolume density(const FluidGrid& grid);
  Vec3 extentMax() const { return origin + h * Vec3(dims.nx, dims.ny, dims.nz); }
  bool contains(const Vec3& p) const;
  double sample(const Vec3& p) const;
  /// Central difference of the interpolated field with half-width h.
  Vec3 gradient(const Vec3& p) const;
  /// Copy with each value replaced by the mean of its 3^3 neighbourhood
  /// (clipped at the edges), applied `passes` times.
  ScalarVolume smoothed(int passes) const;
};

/// eta = 1 + exaggeration * k * rho.
inline double refractiveIndex(double rho, double k_gladstone, double exaggeration = 1.0) {
  return 1.0 + exaggeration * k_gladstone * rho;
}

/// Direction after crossing an interface with normal n from index eta1
/// into eta2 (vector Snell's law). Returns the mirror reflection on total
/// internal reflection and sets `reflected`. The result is unit length.
Vec3 snellRefract(const Vec3& d, const Vec3& n, double eta1, double eta2, bool* reflected = nullptr);

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();
};

struct RefractionConfig {
  double k_gladstone = 2.26e-4;
  double exaggeration = 1.0;
  double step = 0.0;            // m; 0 selects h / 4
  double bend_threshold = 1e-6; // minimum index change between bends
  int smoothing_passes = 0;     // optional gradient smoothing, off by default
  std::size_t max_steps = 1u << 20;
  bool record_path = false;
};

struct RayPath {
  Vec3 position = Vec3::Zero();  // where the march stopped
  Vec3 direction = Vec3::UnitX();
  double eta = 1.0;              // index at the last bend
  std::size_t bends = 0;
  std::size_t reflections = 0;
  std::vector<Vec3> points;      // filled when record_path is set
};

/// Marches a ray through the volume. The index is re-sampled every step;
/// once it has changed by more than the threshold since the last bend, the
/// direction bends by Snell's law across the plane normal to the density
/// gradient. A zero gradient means no bend. On leaving the volume any
/// residual index change is applied across the last interface normal.
/// A ray that never enters the volume is returned unchanged.
RayPath refractRay(const ScalarVolume& density, const Ray& ray, const RefractionConfig& config);

/// Entry and exit parameters of a ray against an axis-aligned box.
std::optional<std::pair<double, double>> intersectBox(const Vec3& lo, const Vec3& hi, const Ray& ray);

}  // namespace blastvox

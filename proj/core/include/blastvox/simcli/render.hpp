#pragma once

#include "blastvox/effects/camera.hpp"
#include "blastvox/effects/refraction.hpp"
#include "blastvox/simcli/slice.hpp"

namespace blastvox {

struct RefractionRenderOptions {
  Camera camera;
  RefractionConfig refraction;
  double checker_degrees = 1.0;  // angular size of the background checker squares
};

/// Background checkerboard seen through the gas. Each pixel's ray is bent
/// through the density field and the checker is looked up by its exit
/// direction, so a uniform volume shows the undistorted pattern. Metadata
/// records the largest deflection in degrees.
SliceImage renderRefraction(const Snapshot& snap, const RefractionRenderOptions& options);

struct ParticleRenderOptions {
  Camera camera;
  double tracer_radius = 0.5;  // m
  bool dust = true;
  Rgba dust_color{0.55, 0.5, 0.45, 0.25};
};

/// Tracers (blackbody colours) and dust metaparticles splatted as Gaussian
/// blobs over a black background.
SliceImage renderParticles(const Snapshot& snap, const ParticleRenderOptions& options);

}  // namespace blastvox

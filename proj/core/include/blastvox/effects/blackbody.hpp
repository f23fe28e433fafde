#pragma once

#include <array>

namespace blastvox {

struct Rgba {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  double a = 0.0;
};

struct BlackbodyConfig {
  std::array<double, 3> wavelengths{610e-9, 549e-9, 468e-9};  // m, for R, G, B
  double reference_temperature = 2900.0;  // K; brightest channel maps to 1 here
  double alpha_start = 500.0;             // K, fully transparent at or below
  double alpha_full = 1500.0;             // K, fully opaque at or above
};

/// Planck spectral radiance B(lambda, T) in W / (m^2 sr m).
double planckRadiance(double wavelength, double T);

/// Colour of a blackbody at T. Each channel is the radiance at its
/// wavelength divided by the largest channel radiance at the reference
/// temperature, clamped to 1. Opacity ramps linearly between the alpha
/// temperatures. T <= 0 gives transparent black.
Rgba blackbodyColor(double T, const BlackbodyConfig& config = {});

}  // namespace blastvox

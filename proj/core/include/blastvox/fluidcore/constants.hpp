#pragma once

#include "blastvox/types.hpp"

namespace blastvox {

inline constexpr double kAtmosphere = 101325.0;  // Pa
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

/// Material constants of air. Defaults are standard sea-level values.
struct PhysicalConstants {
  double mu = 1.8e-5;          // viscosity, N s / m^2
  double k_thermal = 0.026;    // thermal conductivity, W / (m K)
  double c_v = 717.5;          // specific heat at constant volume, J / (kg K)
  double R = 287.0;            // gas constant of air, J / (kg K)
  double k_gladstone = 2.26e-4;  // Dale-Gladstone constant, m^3 / kg
  Vec3 g{0.0, 0.0, -9.81};     // body-force acceleration, m / s^2

  /// Ratio of specific heats; always derived from R and c_v.
  double gamma() const { return 1.0 + R / c_v; }

  /// Throws ConfigError unless mu, k_thermal, c_v and R are strictly positive.
  void validate() const;
};

}  // namespace blastvox

#include "blastvox/effects/blackbody.hpp"

#include <algorithm>
#include <cmath>

namespace blastvox {

namespace {
constexpr double kPlanck = 6.62607015e-34;
constexpr double kLight = 299792458.0;
constexpr double kBoltz = 1.380649e-23;
}  // namespace

double planckRadiance(double wavelength, double T) {
  if (T <= 0.0) return 0.0;
  const double x = kPlanck * kLight / (wavelength * kBoltz * T);
  const double l5 = wavelength * wavelength * wavelength * wavelength * wavelength;
  return 2.0 * kPlanck * kLight * kLight / (l5 * std::expm1(x));
}

Rgba blackbodyColor(double T, const BlackbodyConfig& config) {
  if (!(T > 0.0)) return {};
  double ref = 0.0;
  for (const double w : config.wavelengths) ref = std::max(ref, planckRadiance(w, config.reference_temperature));
  const auto channel = [&](int c) { return std::min(1.0, planckRadiance(config.wavelengths[c], T) / ref); };
  Rgba out{channel(0), channel(1), channel(2), 0.0};
  const double span = config.alpha_full - config.alpha_start;
  if (span <= 0.0) out.a = T >= config.alpha_full ? 1.0 : 0.0;
  else out.a = std::clamp((T - config.alpha_start) / span, 0.0, 1.0);
  return out;
}

}  // namespace blastvox

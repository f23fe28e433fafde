#include "blastvox/fluidcore/constants.hpp"

#include <string>

#include "blastvox/errors.hpp"

namespace blastvox {

void PhysicalConstants::validate() const {
  auto require = [](double value, const char* name) {
    if (!(value > 0.0)) throw ConfigError(std::string(name) + " must be strictly positive");
  };
  require(mu, "mu");
  require(k_thermal, "k_thermal");
  require(c_v, "c_v");
  require(R, "R");
  if (!(k_gladstone >= 0.0)) throw ConfigError("k_gladstone must be non-negative");
}

}  // namespace blastvox

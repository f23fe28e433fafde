#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blastvox/boundary/boundary.hpp"
#include "blastvox/coupling/rigid_body.hpp"
#include "blastvox/effects/blackbody.hpp"
#include "blastvox/effects/dust.hpp"
#include "blastvox/effects/refraction.hpp"
#include "blastvox/errors.hpp"
#include "blastvox/geometry/charge.hpp"
#include "blastvox/geometry/voxelize.hpp"

namespace blastvox {

/// Geometry description resolved into a mesh at load time.
struct ShapeConfig {
  std::string type = "sphere";  // sphere, box, cylinder, torus, wedge, mesh
  Vec3 center = Vec3::Zero();
  Vec3 lo = Vec3::Zero();        // box
  Vec3 hi = Vec3::Zero();
  double radius = 1.0;           // sphere, cylinder
  double height = 1.0;           // cylinder, wedge
  double width = 1.0;            // wedge
  double length = 1.0;           // wedge
  double major_radius = 2.0;     // torus
  double minor_radius = 0.5;
  double volume = 0.0;           // > 0 rescales the shape to this volume about `center`
  int resolution = 16;
  std::filesystem::path file;    // mesh; relative paths resolve against the scenario file
  Vec3 offset = Vec3::Zero();    // mesh translation
};

TriangleMesh buildShape(const ShapeConfig& shape);

struct ChargeConfig {
  std::string name;
  ShapeConfig shape;
  double P0 = 1000.0 * kAtmosphere;
  double T0 = 2900.0;
  Trigger trigger;
};

struct BodyConfig {
  std::string name;
  ShapeConfig shape;
  MotionMode motion = MotionMode::fixed;
  double mass = 0.0;     // kg; 0 = derive from density
  double density = 0.0;  // kg/m^3
  Vec3 velocity = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();
  double stop_time = -1.0;  // s; kinematic bodies halt here (< 0: never)
  std::filesystem::path force_file;  // empty = no export
  int force_every = 1;               // export every n-th step
};

struct TracerConfig {
  std::size_t count = 0;
  std::string charge;  // name of the charge whose shape is seeded
  BlackbodyConfig colors;
};

struct SlowRegimeConfig {
  bool enabled = true;
  double threshold = 10.0;  // Pa over ambient on an outer free face
  int quiet_steps = 10;
};

struct OutputConfig {
  std::filesystem::path directory = "out";
  double snapshot_interval = 0.0;  // s; 0 = only the final snapshot
  bool compress = false;
  bool tracks = false;
  bool write_outputs = true;
};

struct ProbeConfig {
  std::string name;
  Vec3 position = Vec3::Zero();
};

struct Scenario {
  std::string name = "scenario";
  std::filesystem::path base_dir = ".";
  GridDims dims{32, 32, 32};
  double h = 1.0;
  Vec3 origin = Vec3::Zero();
  double dt = 1.0e-4;
  double dt_slow = 5.0e-4;
  double duration = 0.01;
  SlowRegimeConfig slow;
  double ambient_P = kAtmosphere;
  double ambient_T = 290.0;
  PhysicalConstants consts;
  BoundarySpec boundary;
  VoxelizeOptions voxelize;
  double revoxelize_fraction = 0.25;  // of h
  int force_activation_radius = 2;    // voxels around moving bodies kept active
  std::vector<ChargeConfig> charges;
  std::vector<BodyConfig> bodies;
  TracerConfig tracers;
  DustConfig dust;
  RefractionConfig refraction;
  OutputConfig output;
  std::vector<ProbeConfig> probes;
  std::uint64_t seed = 1;

  GridSpec gridSpec() const { return {dims, h, origin}; }
};

struct ValidationIssue {
  std::string path;
  std::string message;
};

/// Thrown by the loaders with every issue found.
class ScenarioError : public ConfigError {
 public:
  explicit ScenarioError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// "key.path=value" assignments applied to the document before parsing.
/// Sequence elements are addressed by index, e.g. "charges.0.pressure".
using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses YAML text. Structural problems (unknown keys, wrong types, bad
/// units) and physical problems (see validateScenario) are all collected
/// and thrown together as ScenarioError.
Scenario parseScenario(const std::string& text, const std::filesystem::path& base_dir = ".",
                       const Overrides& overrides = {});
Scenario loadScenario(const std::filesystem::path& path, const Overrides& overrides = {});

/// Physical consistency checks on a parsed scenario.
std::vector<ValidationIssue> validateScenario(const Scenario& scenario);

/// Value in SI units of a quantity such as "1000 atm", "0.01 ms" or a bare
/// number. `dimension` is one of pressure, temperature, time, length,
/// volume, velocity, mass, density, none. Throws ConfigError.
double parseQuantity(const std::string& text, const std::string& dimension);

}  // namespace blastvox

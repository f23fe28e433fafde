#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "blastvox/coupling/displacement.hpp"
#include "blastvox/effects/dust.hpp"
#include "blastvox/effects/tracers.hpp"
#include "blastvox/fluidcore/fluid_grid.hpp"
#include "blastvox/integrator/integrator.hpp"

namespace blastvox {

struct BodyState {
  std::string name;
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  Vec3 linear_velocity = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();
  Vec3 voxelized_position = Vec3::Zero();
  Quat voxelized_orientation = Quat::Identity();
};

/// Orchestrator state needed to continue a run exactly.
struct RunState {
  double dt = 0.0;
  bool slow_armed = false;
  bool slow_active = false;
  std::int32_t quiet_steps = 0;
  double next_output_time = 0.0;
  std::uint64_t output_index = 0;      // next sequence number
  std::uint64_t last_output_step = 0;  // step of the latest sequence snapshot
  bool any_output = false;
  std::uint64_t next_dust_id = 0;
  std::vector<std::uint8_t> charges_fired;
  StepDiagnostics diagnostics;
};

/// Full simulation state at one instant. The layout is documented in
/// docs/snapshot-format.md.
struct Snapshot {
  GridDims dims;
  double h = 1.0;
  Vec3 origin = Vec3::Zero();
  double time = 0.0;
  std::uint64_t step = 0;
  double ambient_P = kAtmosphere;
  double ambient_T = 290.0;
  std::vector<VoxelState> cells;

  std::vector<TracerParticle> tracers;
  std::vector<DustMetaParticle> dust;
  std::vector<BodyState> bodies;

  bool has_displacement = false;
  std::vector<double> displacement_target;
  std::vector<DisplacementModel::Entry> displacement_pending;
  DisplacementStats displacement_stats;

  bool has_run_state = false;
  RunState run;

  static Snapshot fromGrid(const FluidGrid& grid, double time, std::uint64_t step);
  /// Grid with the stored state in both buffers.
  FluidGrid toGrid() const;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

std::vector<std::uint8_t> encodeSnapshot(const Snapshot& snap, bool compress = false);
/// Throws IoError on a bad magic, version, checksum or truncated data.
Snapshot decodeSnapshot(std::span<const std::uint8_t> bytes);

void writeSnapshot(const std::filesystem::path& path, const Snapshot& snap, bool compress = false);
Snapshot readSnapshot(const std::filesystem::path& path);

/// Names of the per-voxel fields in payload order.
const std::vector<std::string>& snapshotFieldNames();
/// Per-voxel value of a named field ("rho", "vx", "speed", "P", ...).
/// Throws ConfigError for an unknown name.
double fieldValue(const VoxelState& cell, const std::string& field);

}  // namespace blastvox

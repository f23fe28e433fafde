#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blastvox/coupling/displacement.hpp"
#include "blastvox/coupling/force_export.hpp"
#include "blastvox/coupling/rigid_body.hpp"
#include "blastvox/integrator/integrator.hpp"
#include "blastvox/simcli/scenario.hpp"
#include "blastvox/simcli/snapshot.hpp"

namespace blastvox {

struct ProbeSample {
  std::size_t probe = 0;
  std::uint64_t step = 0;
  double time = 0.0;
  double P = 0.0;
  double rho = 0.0;
  double T = 0.0;
  Vec3 v = Vec3::Zero();
};

struct RunSummary {
  std::uint64_t steps = 0;  // steps taken by this call
  double time = 0.0;        // simulated time reached
  std::vector<std::filesystem::path> files;
  StepDiagnostics diagnostics;
  bool slow_active = false;
};

/// Coupled fluid, rigid-body and effects loop for one scenario. Each step
/// applies fluid loads to bodies, re-voxelizes bodies that moved, drains the
/// displacement model, advances the fluid, fires triggered charges and
/// advects particles.
class Simulation {
 public:
  /// Sequence snapshots (`checkpoint == false`) follow the output cadence;
  /// a checkpoint is emitted when a run stops before the scenario ends.
  using SnapshotSink = std::function<void(const Snapshot&, bool checkpoint)>;
  using StepObserver = std::function<void(const Simulation&)>;

  /// Fresh start: ambient air, bodies voxelized, immediate charges ignited.
  explicit Simulation(Scenario scenario);
  /// Continues from a snapshot written by a run of the same scenario.
  Simulation(Scenario scenario, const Snapshot& from);

  /// One coupling step. Throws NumericAbort on a non-finite field.
  void step();
  /// Steps until the scenario duration, or `stop_time` if it is earlier,
  /// emitting snapshots on cadence and writing outputs when enabled.
  RunSummary run(std::optional<double> stop_time = std::nullopt);

  Snapshot snapshot() const;

  void setSnapshotSink(SnapshotSink sink) { sink_ = std::move(sink); }
  void setObserver(StepObserver observer) { observer_ = std::move(observer); }

  const Scenario& scenario() const { return scenario_; }
  const FluidGrid& grid() const { return grid_; }
  double time() const { return time_; }
  std::uint64_t stepIndex() const { return step_; }
  double dt() const { return run_.dt; }
  bool slowActive() const { return run_.slow_active; }
  const std::vector<RigidBody>& bodies() const { return bodies_; }
  const std::vector<TracerParticle>& tracers() const { return tracers_; }
  const std::vector<DustMetaParticle>& dust() const { return dust_; }
  const DisplacementModel& displacement() const { return displacement_; }
  const std::vector<ProbeSample>& probeSamples() const { return probe_samples_; }
  /// Step-wise diagnostics of the latest step and the run total.
  const StepDiagnostics& lastDiagnostics() const { return ctx_.diagnostics; }
  const StepDiagnostics& totalDiagnostics() const { return run_.diagnostics; }
  /// Active set used by the latest fluid step.
  const ActiveSet& lastActiveSet() const { return ctx_.active; }
  bool chargeFired(std::size_t i) const { return run_.charges_fired.at(i) != 0; }
  /// Non-fatal problems noticed so far (skipped charge voxels, CFL > 1).
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Largest P - ambient over open voxels touching a free outer face; 0
  /// when no face is free.
  static double maxOuterOverpressure(const FluidGrid& grid, const BoundarySpec& boundary);
  /// First non-finite field, as an exception ready to throw.
  static std::optional<NumericAbort> findNonFinite(const FluidGrid& grid, std::uint64_t step);

 private:
  void buildStatic();
  void revoxelize(bool initial);
  void updateForcedMask();
  void fireCharge(std::size_t i);
  void checkTriggers();
  void advanceEffects(double dt);
  void updateSlowRegime();
  void sampleProbes();
  void emit(bool checkpoint, RunSummary* summary);
  void openOutputs(bool append);

  Scenario scenario_;
  FluidGrid grid_;
  Integrator integrator_;
  StepContext ctx_;
  DisplacementModel displacement_;
  std::vector<RigidBody> bodies_;
  std::vector<Charge> charges_;
  std::vector<std::vector<std::uint32_t>> charge_cells_;
  std::vector<std::vector<std::uint32_t>> charge_watch_;
  std::vector<TracerParticle> tracers_;
  std::vector<DustMetaParticle> dust_;
  std::vector<std::uint8_t> movable_seed_;
  std::vector<std::size_t> probe_cells_;
  std::vector<ProbeSample> probe_samples_;
  std::vector<ForceExportWriter> force_writers_;
  std::ofstream probe_out_;
  double time_ = 0.0;
  std::uint64_t step_ = 0;
  RunState run_;
  SnapshotSink sink_;
  StepObserver observer_;
  std::vector<std::string> warnings_;
  bool cfl_warned_ = false;
  bool outputs_open_ = false;
  bool resumed_ = false;
};

}  // namespace blastvox

#include "blastvox/simcli/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>

#include "blastvox/errors.hpp"
#include "blastvox/geometry/charge.hpp"
#include "blastvox/geometry/voxelize.hpp"

namespace blastvox {

namespace {

std::size_t voxelContaining(const GridSpec& g, const Vec3& p) {
  int c[3];
  for (int a = 0; a < 3; ++a) {
    const int n = g.dims[a];
    c[a] = std::clamp(static_cast<int>(std::floor((p[a] - g.origin[a]) / g.h)), 0, n - 1);
  }
  return g.dims.index(c[0], c[1], c[2]);
}

std::string sequenceName(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06llu.bvx", static_cast<unsigned long long>(index));
  return buf;
}

std::array<bool, 6> hardFaces(const BoundarySpec& b) {
  std::array<bool, 6> out{};
  for (int s = 0; s < 6; ++s) out[s] = b.outer_faces[s] == FaceType::hard;
  return out;
}

}  // namespace

Simulation::Simulation(Scenario scenario) : scenario_(std::move(scenario)) {
  buildStatic();
  initAmbient(grid_, scenario_.ambient_P, scenario_.ambient_T, scenario_.consts);
  revoxelize(true);
  displacement_ = DisplacementModel(grid_);
  run_.dt = scenario_.dt;
  run_.charges_fired.assign(charges_.size(), 0);
  for (std::size_t i = 0; i < charges_.size(); ++i) {
    const Trigger& t = charges_[i].trigger;
    if (t.kind == TriggerKind::immediate || (t.kind == TriggerKind::at_time && t.time <= 0.0)) fireCharge(i);
  }
  classifyCells(grid_, ctx_.boundary, updateActiveSet(grid_, ctx_.boundary, ctx_.forced_active));
  sampleProbes();
}

Simulation::Simulation(Scenario scenario, const Snapshot& from) : scenario_(std::move(scenario)) {
  buildStatic();
  if (from.dims.nx != scenario_.dims.nx || from.dims.ny != scenario_.dims.ny || from.dims.nz != scenario_.dims.nz ||
      from.h != scenario_.h) {
    throw ConfigError("snapshot grid does not match the scenario grid");
  }
  if (!from.has_run_state) throw ConfigError("snapshot carries no run state and cannot be resumed");
  if (from.bodies.size() != bodies_.size()) throw ConfigError("snapshot body count does not match the scenario");
  if (from.run.charges_fired.size() != charges_.size()) {
    throw ConfigError("snapshot charge count does not match the scenario");
  }
  grid_ = from.toGrid();
  time_ = from.time;
  step_ = from.step;
  run_ = from.run;
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    const BodyState& s = from.bodies[i];
    RigidBody& b = bodies_[i];
    if (s.name != b.name) throw ConfigError("snapshot body '" + s.name + "' does not match scenario body '" + b.name + "'");
    b.position = s.position;
    b.orientation = s.orientation;
    b.linear_velocity = s.linear_velocity;
    b.angular_velocity = s.angular_velocity;
    b.voxelized_position = s.voxelized_position;
    b.voxelized_orientation = s.voxelized_orientation;
  }
  tracers_ = from.tracers;
  dust_ = from.dust;
  if (from.has_displacement) {
    if (from.displacement_target.size() != grid_.size()) throw ConfigError("snapshot displacement block is malformed");
    displacement_.restore(from.displacement_target, from.displacement_pending, from.displacement_stats);
  } else {
    displacement_ = DisplacementModel(grid_);
  }
  updateForcedMask();
  resumed_ = true;
}

void Simulation::buildStatic() {
  const Scenario& sc = scenario_;
  grid_ = FluidGrid(sc.dims, sc.h, sc.origin);
  grid_.setAmbient(sc.ambient_P, sc.ambient_T);
  ctx_.consts = sc.consts;
  ctx_.boundary = sc.boundary;
  const GridSpec spec = sc.gridSpec();

  for (const BodyConfig& bc : sc.bodies) {
    const TriangleMesh mesh = buildShape(bc.shape);
    double mass = bc.mass;
    if (!(mass > 0.0)) mass = bc.density > 0.0 ? bc.density * mesh.signedVolume() : 1.0;
    RigidBody body = makeRigidBody(bc.name, mesh, mass, bc.motion, sc.h);
    body.linear_velocity = bc.velocity;
    body.angular_velocity = bc.angular_velocity;
    bodies_.push_back(std::move(body));
  }
  for (const ChargeConfig& cc : sc.charges) {
    Charge c{cc.name, buildShape(cc.shape), cc.P0, cc.T0, cc.trigger};
    auto cells = chargeCells(c.mesh, spec, sc.voxelize.samples);
    auto watch = cells;
    const auto shell = chargeShell(sc.dims, cells);
    watch.insert(watch.end(), shell.begin(), shell.end());
    std::sort(watch.begin(), watch.end());
    charge_cells_.push_back(std::move(cells));
    charge_watch_.push_back(std::move(watch));
    charges_.push_back(std::move(c));
  }
  for (const ProbeConfig& p : sc.probes) probe_cells_.push_back(voxelContaining(spec, p.position));
}

void Simulation::revoxelize(bool initial) {
  if (bodies_.empty()) return;
  std::vector<TriangleMesh> meshes;
  meshes.reserve(bodies_.size());
  for (const RigidBody& b : bodies_) meshes.push_back(b.worldHull());
  std::vector<const TriangleMesh*> ptrs;
  for (const TriangleMesh& m : meshes) ptrs.push_back(&m);
  const std::vector<double> free = voxelize(ptrs, scenario_.gridSpec(), scenario_.voxelize);

  if (initial) {
    auto cells = grid_.current();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (free[i] >= 1.0) continue;
      if (free[i] <= 0.0) {
        cells[i] = VoxelState{};
        cells[i].partial_volume = 0.0;
        cells[i].flag = CellFlag::hard_boundary;
      } else {
        cells[i].partial_volume = free[i];
      }
    }
    grid_.mirrorToNext();
  } else {
    std::vector<Aabb> boxes;
    for (std::size_t b = 0; b < bodies_.size(); ++b) {
      Aabb box = meshes[b].bounds();
      const Vec3 pad = Vec3::Constant(2.0 * grid_.h());
      box.lo -= pad;
      box.hi += pad;
      boxes.push_back(box);
    }
    const auto piston = [&](std::size_t i) -> Vec3 {
      const Vec3 c = grid_.center(i);
      for (std::size_t b = 0; b < bodies_.size(); ++b) {
        if (!bodies_[b].movable()) continue;
        const Aabb& box = boxes[b];
        if ((c.array() >= box.lo.array()).all() && (c.array() <= box.hi.array()).all()) {
          return bodies_[b].pointVelocity(c);
        }
      }
      return Vec3::Zero();
    };
    displacement_.schedule(grid_, free, piston, scenario_.consts);
  }
  for (RigidBody& b : bodies_) {
    if (b.movable()) b.markVoxelized();
  }
  updateForcedMask();
}

void Simulation::updateForcedMask() {
  ctx_.forced_active.clear();
  if (!scenario_.boundary.prune_enabled) return;
  std::vector<TriangleMesh> meshes;
  for (const RigidBody& b : bodies_) {
    if (b.movable()) meshes.push_back(b.hull.transformed(b.voxelized_orientation, b.voxelized_position));
  }
  if (meshes.empty()) return;
  std::vector<const TriangleMesh*> ptrs;
  for (const TriangleMesh& m : meshes) ptrs.push_back(&m);
  const auto occ = solidOccupancy(ptrs, scenario_.gridSpec(), scenario_.voxelize.samples);
  movable_seed_.assign(occ.size(), 0);
  for (std::size_t i = 0; i < occ.size(); ++i) movable_seed_[i] = occ[i] > 0.0 ? 1 : 0;
  ctx_.forced_active = dilateMask(grid_.dims(), movable_seed_, scenario_.force_activation_radius);
}

void Simulation::fireCharge(std::size_t i) {
  const Charge& c = charges_[i];
  const IgnitionReport rep = igniteCharge(grid_, charge_cells_[i], c.P0, c.T0, scenario_.consts);
  if (rep.skipped_solid > 0) {
    warnings_.push_back("charge '" + c.name + "': " + std::to_string(rep.skipped_solid) +
                        " voxel(s) inside solids were not ignited");
  }
  run_.charges_fired[i] = 1;
  const TracerConfig& tc = scenario_.tracers;
  if (tc.count == 0) return;
  const bool match = tc.charge.empty() ? i == 0 : tc.charge == c.name;
  if (!match) return;
  tracers_ = seedTracers(c.mesh, tc.count, scenario_.seed);
  for (TracerParticle& p : tracers_) advectTracer(p, grid_, 0.0, tc.colors);
}

void Simulation::checkTriggers() {
  for (std::size_t i = 0; i < charges_.size(); ++i) {
    if (run_.charges_fired[i]) continue;
    if (triggerSatisfied(charges_[i].trigger, grid_, time_, charge_watch_[i])) fireCharge(i);
  }
}

void Simulation::advanceEffects(double dt) {
  if (!tracers_.empty()) advectTracers(tracers_, grid_, dt, scenario_.tracers.colors);
  const DustConfig& dc = scenario_.dust;
  if (!dust_.empty()) advectDust(dust_, grid_, dt, scenario_.consts, dc);
  if (dc.rate > 0.0) {
    const auto surface = dustSurfaceCells(grid_, hardFaces(scenario_.boundary));
    auto spawned = spawnDust(grid_, surface, dc, dt, scenario_.seed, step_, run_.next_dust_id);
    run_.next_dust_id += spawned.size();
    dust_.insert(dust_.end(), spawned.begin(), spawned.end());
  }
}

double Simulation::maxOuterOverpressure(const FluidGrid& grid, const BoundarySpec& boundary) {
  const GridDims& d = grid.dims();
  const double Pa = grid.ambientP();
  double best = 0.0;
  for (int slot = 0; slot < 6; ++slot) {
    if (boundary.outer_faces[slot] != FaceType::free) continue;
    const int axis = slot / 2;
    const int fixed = slot % 2 == 0 ? 0 : d[axis] - 1;
    const int a1 = (axis + 1) % 3;
    const int a2 = (axis + 2) % 3;
    for (int u = 0; u < d[a1]; ++u) {
      for (int w = 0; w < d[a2]; ++w) {
        int c[3];
        c[axis] = fixed;
        c[a1] = u;
        c[a2] = w;
        const VoxelState& s = grid.at(c[0], c[1], c[2]);
        if (s.partial_volume > 0.0) best = std::max(best, s.P - Pa);
      }
    }
  }
  return best;
}

std::optional<NumericAbort> Simulation::findNonFinite(const FluidGrid& grid, std::uint64_t step) {
  const auto cells = grid.current();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const VoxelState& s = cells[i];
    const char* field = nullptr;
    if (!std::isfinite(s.rho)) field = "rho";
    else if (!s.v.allFinite()) field = "v";
    else if (!std::isfinite(s.N)) field = "N";
    else if (!std::isfinite(s.T)) field = "T";
    else if (!std::isfinite(s.P)) field = "P";
    if (field) {
      const Index3 c = grid.dims().coord(i);
      return NumericAbort("non-finite " + std::string(field) + " at voxel " + std::to_string(i) + " (" +
                              std::to_string(c.i) + ", " + std::to_string(c.j) + ", " + std::to_string(c.k) +
                              ") at step " + std::to_string(step),
                          i, step);
    }
  }
  return std::nullopt;
}

void Simulation::updateSlowRegime() {
  const SlowRegimeConfig& cfg = scenario_.slow;
  if (!cfg.enabled || run_.slow_active) return;
  bool any_free = false;
  for (const FaceType f : scenario_.boundary.outer_faces) any_free = any_free || f == FaceType::free;
  if (!any_free) return;
  const double over = maxOuterOverpressure(grid_, scenario_.boundary);
  if (!run_.slow_armed) {
    run_.slow_armed = over > cfg.threshold;
    return;
  }
  run_.quiet_steps = over > cfg.threshold ? 0 : run_.quiet_steps + 1;
  if (run_.quiet_steps >= cfg.quiet_steps) {
    run_.slow_active = true;
    run_.dt = scenario_.dt_slow;
  }
}

void Simulation::sampleProbes() {
  for (std::size_t p = 0; p < probe_cells_.size(); ++p) {
    const VoxelState& s = grid_.at(probe_cells_[p]);
    ProbeSample ps{p, step_, time_, s.P, s.rho, s.T, s.v};
    probe_samples_.push_back(ps);
    if (probe_out_.is_open()) {
      probe_out_ << scenario_.probes[p].name << ',' << ps.step << ',' << ps.time << ',' << ps.P << ',' << ps.rho
                 << ',' << ps.T << ',' << ps.v.x() << ',' << ps.v.y() << ',' << ps.v.z() << '\n';
    }
  }
}

void Simulation::step() {
  const double dt = run_.dt;
  const Vec3& g = scenario_.consts.g;
  bool moved = false;
  for (std::size_t b = 0; b < bodies_.size(); ++b) {
    RigidBody& body = bodies_[b];
    const BodyConfig& cfg = scenario_.bodies[b];
    const bool exporting = b < force_writers_.size() && force_writers_[b].isOpen() &&
                           step_ % static_cast<std::uint64_t>(cfg.force_every) == 0;
    if (body.mode == MotionMode::kinematic && cfg.stop_time >= 0.0 && time_ + 0.5 * dt >= cfg.stop_time) {
      // Voxelize the final pose while the piston velocity is still known.
      const bool moving = body.linear_velocity.squaredNorm() + body.angular_velocity.squaredNorm() > 0.0;
      if (moving && body.displacementSinceVoxelization() > 0.0) revoxelize(false);
      body.linear_velocity = Vec3::Zero();
      body.angular_velocity = Vec3::Zero();
    }
    if (body.mode != MotionMode::dynamic && !exporting) {
      if (body.movable()) {
        integrateBody(body, FluidLoad{}, g, dt);
        moved = moved || body.displacementSinceVoxelization() > scenario_.revoxelize_fraction * grid_.h();
      }
      continue;
    }
    const FluidLoad load = fluidLoad(grid_, body);
    if (exporting) force_writers_[b].write(time_, load.triangle_forces);
    if (!body.movable()) continue;
    integrateBody(body, load, g, dt);
    moved = moved || body.displacementSinceVoxelization() > scenario_.revoxelize_fraction * grid_.h();
  }
  if (moved) revoxelize(false);
  displacement_.advance(grid_, dt, scenario_.consts);

  ctx_.dt = dt;
  ctx_.diagnostics = StepDiagnostics{};
  integrator_.step(grid_, ctx_);
  run_.diagnostics.accumulate(ctx_.diagnostics);
  if (ctx_.diagnostics.max_cfl > 1.0 && !cfl_warned_) {
    cfl_warned_ = true;
    warnings_.push_back("CFL number " + std::to_string(ctx_.diagnostics.max_cfl) + " exceeds 1 at step " +
                        std::to_string(step_ + 1) + "; the timestep is too large for this flow");
  }
  if (auto err = findNonFinite(grid_, step_ + 1)) throw *err;
  time_ += dt;
  ++step_;

  checkTriggers();
  advanceEffects(dt);
  updateSlowRegime();
  sampleProbes();
  if (observer_) observer_(*this);
}

Snapshot Simulation::snapshot() const {
  Snapshot s = Snapshot::fromGrid(grid_, time_, step_);
  s.tracers = tracers_;
  s.dust = dust_;
  for (const RigidBody& b : bodies_) {
    s.bodies.push_back({b.name, b.position, b.orientation, b.linear_velocity, b.angular_velocity,
                        b.voxelized_position, b.voxelized_orientation});
  }
  s.has_displacement = true;
  s.displacement_target.assign(displacement_.target().begin(), displacement_.target().end());
  s.displacement_pending = displacement_.pending();
  s.displacement_stats = displacement_.stats();
  s.has_run_state = true;
  s.run = run_;
  return s;
}

void Simulation::openOutputs(bool append) {
  if (outputs_open_ || !scenario_.output.write_outputs) return;
  const auto& dir = scenario_.output.directory;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  if (!probe_cells_.empty()) {
    probe_out_.open(dir / "probes.csv", append ? std::ios::app : std::ios::trunc);
    if (!probe_out_) throw IoError("cannot write " + (dir / "probes.csv").string());
    probe_out_ << std::setprecision(17);
    if (!append) {
      probe_out_ << "probe,step,time,P,rho,T,vx,vy,vz\n";
      for (const ProbeSample& ps : probe_samples_) {
        probe_out_ << scenario_.probes[ps.probe].name << ',' << ps.step << ',' << ps.time << ',' << ps.P << ','
                   << ps.rho << ',' << ps.T << ',' << ps.v.x() << ',' << ps.v.y() << ',' << ps.v.z() << '\n';
      }
    }
  }
  force_writers_.resize(bodies_.size());
  for (std::size_t b = 0; b < bodies_.size(); ++b) {
    std::filesystem::path f = scenario_.bodies[b].force_file;
    if (f.empty()) continue;
    if (f.is_relative()) f = dir / f;
    force_writers_[b] = ForceExportWriter(f, bodies_[b].name, bodies_[b].mesh.triangles.size(), append);
  }
  outputs_open_ = true;
}

void Simulation::emit(bool checkpoint, RunSummary* summary) {
  std::string name = "checkpoint.bvx";
  if (!checkpoint) {
    name = sequenceName(run_.output_index);
    ++run_.output_index;
    run_.last_output_step = step_;
    run_.any_output = true;
  }
  const Snapshot snap = snapshot();
  if (sink_) sink_(snap, checkpoint);
  if (!scenario_.output.write_outputs) return;
  const auto& dir = scenario_.output.directory;
  writeSnapshot(dir / name, snap, scenario_.output.compress);
  if (summary) summary->files.push_back(dir / name);
  if (!checkpoint && scenario_.output.tracks && !tracers_.empty()) {
    const auto path = dir / ("tracers_" + name.substr(5, 6) + ".csv");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17) << "id,x,y,z,T,r,g,b,a,frozen\n";
    for (const TracerParticle& t : tracers_) {
      out << t.id << ',' << t.position.x() << ',' << t.position.y() << ',' << t.position.z() << ','
          << t.temperature << ',' << t.color.r << ',' << t.color.g << ',' << t.color.b << ',' << t.color.a << ','
          << (t.frozen ? 1 : 0) << '\n';
    }
  }
  if (!checkpoint && scenario_.output.tracks && !dust_.empty()) {
    const auto path = dir / ("dust_" + name.substr(5, 6) + ".csv");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17) << "id,x,y,z,variance,diameter,weight,frozen\n";
    for (const DustMetaParticle& d : dust_) {
      out << d.id << ',' << d.center.x() << ',' << d.center.y() << ',' << d.center.z() << ',' << d.variance << ','
          << d.diameter << ',' << d.weight << ',' << (d.frozen ? 1 : 0) << '\n';
    }
  }
}

RunSummary Simulation::run(std::optional<double> stop_time) {
  RunSummary summary;
  openOutputs(resumed_ || step_ > 0);
  if (!run_.any_output) {
    run_.next_output_time = scenario_.output.snapshot_interval;
    emit(false, &summary);
  }
  const double duration = scenario_.duration;
  const double end = stop_time ? std::min(*stop_time, duration) : duration;
  const double interval = scenario_.output.snapshot_interval;
  while (end - time_ > 0.5 * run_.dt) {
    step();
    ++summary.steps;
    if (interval > 0.0 && time_ + 0.5 * run_.dt >= run_.next_output_time) {
      while (run_.next_output_time <= time_ + 0.5 * run_.dt) run_.next_output_time += interval;
      emit(false, &summary);
    }
  }
  const bool finished = duration - time_ <= 0.5 * run_.dt;
  if (finished) {
    if (run_.last_output_step != step_) emit(false, &summary);
  } else {
    emit(true, &summary);
  }
  if (probe_out_.is_open()) probe_out_.flush();
  for (ForceExportWriter& w : force_writers_) {
    if (w.isOpen()) w.flush();
  }
  summary.time = time_;
  summary.diagnostics = run_.diagnostics;
  summary.slow_active = run_.slow_active;
  return summary;
}

}  // namespace blastvox

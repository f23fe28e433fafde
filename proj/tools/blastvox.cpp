#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "blastvox/errors.hpp"
#include "blastvox/fluidcore/parallel.hpp"
#include "blastvox/simcli/render.hpp"
#include "blastvox/simcli/scenario.hpp"
#include "blastvox/simcli/simulation.hpp"
#include "blastvox/simcli/slice.hpp"

namespace fs = std::filesystem;
using namespace blastvox;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

Vec3 parseVec3(const std::string& text, const std::string& what) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    try {
      std::size_t used = 0;
      const std::string part = text.substr(start, comma - start);
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError(what + ": expected x,y,z but got '" + text + "'");
    }
    start = comma + 1;
  }
  if (v.size() != 3) throw ConfigError(what + ": expected x,y,z but got '" + text + "'");
  return Vec3(v[0], v[1], v[2]);
}

Index3 parseIndex3(const std::string& text) {
  const Vec3 v = parseVec3(text, "--voxel");
  Index3 c{static_cast<int>(v.x()), static_cast<int>(v.y()), static_cast<int>(v.z())};
  if (c.i != v.x() || c.j != v.y() || c.k != v.z()) throw ConfigError("--voxel expects integer indices");
  return c;
}

int parseAxis(const std::string& a) {
  if (a == "x" || a == "0") return 0;
  if (a == "y" || a == "1") return 1;
  if (a == "z" || a == "2") return 2;
  throw ConfigError("axis must be x, y or z");
}

/// --set key=value plus any unrecognised --dotted.key[=value] flag.
Overrides collectOverrides(const std::vector<std::string>& sets, const std::vector<std::string>& extras) {
  Overrides out;
  const auto add = [&](const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + kv + "' is not key=value");
    out.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  };
  for (const std::string& s : sets) add(s);
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& a = extras[i];
    if (a.rfind("--", 0) != 0 || a.size() < 3) throw ConfigError("unexpected argument '" + a + "'");
    const std::string body = a.substr(2);
    if (body.find('=') != std::string::npos) {
      add(body);
    } else if (i + 1 < extras.size()) {
      add(body + "=" + extras[++i]);
    } else {
      throw ConfigError("flag '" + a + "' needs a value");
    }
  }
  return out;
}

struct CameraFlags {
  std::string eye = "0,-10,0";
  std::string look = "0,0,0";
  std::string up = "0,0,1";
  double fov = 45.0;
  int width = 256;
  int height = 256;

  void add(CLI::App* app) {
    app->add_option("--eye", eye, "camera position x,y,z (m)");
    app->add_option("--look", look, "camera target x,y,z (m)");
    app->add_option("--up", up, "camera up vector");
    app->add_option("--fov", fov, "vertical field of view (degrees)");
    app->add_option("--width", width, "image width (pixels)");
    app->add_option("--height", height, "image height (pixels)");
  }
  Camera camera() const {
    Camera c;
    c.position = parseVec3(eye, "--eye");
    c.look_at = parseVec3(look, "--look");
    c.up = parseVec3(up, "--up");
    c.fov_y_degrees = fov;
    c.width = width;
    c.height = height;
    return c;
  }
};

void printIssues(const ScenarioError& e) {
  for (const ValidationIssue& i : e.issues()) std::cerr << i.path << ": " << i.message << '\n';
}

void printSummary(const Simulation& sim, const RunSummary& s) {
  std::cout << std::setprecision(10) << "steps " << s.steps << " time " << s.time << " s, " << s.files.size()
            << " file(s) written, mass " << totalMass(sim.grid()) << " kg, energy " << totalEnergy(sim.grid())
            << " J" << (s.slow_active ? ", slow regime" : "") << '\n';
  const StepDiagnostics& d = s.diagnostics;
  std::cout << "clamps: density " << d.density_clamps << ", energy " << d.energy_clamps << "; limited donors "
            << d.limited_donors << "; vacuum events " << d.vacuum_events << "; max CFL " << d.max_cfl << '\n';
}

std::vector<fs::path> snapshotFiles(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const std::string& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.path().extension() == ".bvx" && e.path().filename() != "checkpoint.bvx") files.push_back(e.path());
      }
    } else {
      files.emplace_back(in);
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blastvox: voxel blast-wave simulator"};
  app.require_subcommand(1);
  int threads = -1;
  app.add_option("--threads", threads, "worker threads (default: BLASTVOX_THREADS or all cores)");

  std::string scenario_path, snapshot_path, output_path;
  std::vector<std::string> sets;
  std::string stop_at;

  auto* run = app.add_subcommand("run", "run a scenario from t = 0");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--set", sets, "override a config key: key.path=value");
  run->add_option("--stop-at", stop_at, "stop early and write a checkpoint (e.g. '12.5 ms')");
  run->allow_extras();

  auto* resume = app.add_subcommand("resume", "continue a run from a checkpoint or snapshot");
  resume->add_option("scenario", scenario_path, "scenario file")->required();
  resume->add_option("snapshot", snapshot_path, "snapshot to continue from")->required();
  resume->add_option("--set", sets, "override a config key: key.path=value");
  resume->add_option("--stop-at", stop_at, "stop early and write a checkpoint");
  resume->allow_extras();

  auto* validate = app.add_subcommand("validate", "check a scenario and report every problem");
  validate->add_option("scenario", scenario_path, "scenario file")->required();
  validate->add_option("--set", sets, "override a config key: key.path=value");
  validate->allow_extras();

  std::string axis = "z", field = "P", colormap = "hot";
  int index = 0;
  std::optional<double> vmin, vmax;
  auto* slice = app.add_subcommand("slice", "export one voxel layer as a PNG");
  slice->add_option("snapshot", snapshot_path, "snapshot file")->required();
  slice->add_option("--axis", axis, "slice normal: x, y or z");
  slice->add_option("--index", index, "layer index along the axis");
  slice->add_option("--field", field, "rho, vx, vy, vz, speed, N, T, P, partial_volume or flag");
  slice->add_option("--colormap", colormap, "hot or gray");
  slice->add_option("--min", vmin, "value mapped to the bottom of the colormap");
  slice->add_option("--max", vmax, "value mapped to the top of the colormap");
  slice->add_option("-o,--output", output_path, "PNG path")->required();

  CameraFlags refr_cam;
  double exaggeration = 1.0, march_step = 0.0, checker = 1.0;
  int smoothing = 0;
  auto* refr = app.add_subcommand("render-refraction", "render blast-wave refraction of a checker background");
  refr->add_option("snapshot", snapshot_path, "snapshot file")->required();
  refr->add_option("-o,--output", output_path, "PNG path")->required();
  refr_cam.add(refr);
  refr->add_option("--exaggeration", exaggeration, "scale on the Gladstone-Dale constant");
  refr->add_option("--step", march_step, "march step (m); 0 = h/4");
  refr->add_option("--smoothing", smoothing, "box-filter passes on the density before marching");
  refr->add_option("--checker", checker, "checker square size (degrees)");

  CameraFlags part_cam;
  double radius = 0.5;
  bool no_dust = false;
  auto* parts = app.add_subcommand("render-particles", "splat tracers and dust");
  parts->add_option("snapshot", snapshot_path, "snapshot file")->required();
  parts->add_option("-o,--output", output_path, "PNG path")->required();
  part_cam.add(parts);
  parts->add_option("--radius", radius, "tracer blob radius (m)");
  parts->add_flag("--no-dust", no_dust, "omit dust metaparticles");

  std::vector<std::string> probe_inputs;
  std::string voxel;
  auto* probe = app.add_subcommand("probe", "print one voxel's time series from snapshots");
  probe->add_option("snapshots", probe_inputs, "snapshot files or directories")->required();
  probe->add_option("--voxel", voxel, "voxel index i,j,k")->required();
  probe->add_option("--field", field, "field name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const parallel::WorkerLimit limit(threads >= 0 ? threads : parallel::configuredWorkers());

    if (*run || *resume || *validate) {
      CLI::App* cmd = *run ? run : (*resume ? resume : validate);
      const Overrides overrides = collectOverrides(sets, cmd->remaining());
      const Scenario sc = loadScenario(scenario_path, overrides);
      if (*validate) {
        std::cout << "ok: " << sc.name << ", grid " << sc.dims.nx << "x" << sc.dims.ny << "x" << sc.dims.nz
                  << ", " << sc.charges.size() << " charge(s), " << sc.bodies.size() << " body(ies)\n";
        return kExitOk;
      }
      std::optional<double> stop;
      if (!stop_at.empty()) stop = parseQuantity(stop_at, "time");
      std::optional<Simulation> sim;
      if (*run) sim.emplace(sc);
      else sim.emplace(sc, readSnapshot(snapshot_path));
      const RunSummary s = sim->run(stop);
      for (const std::string& w : sim->warnings()) std::cerr << "warning: " << w << '\n';
      printSummary(*sim, s);
      return kExitOk;
    }

    if (*slice) {
      SliceOptions o;
      o.axis = parseAxis(axis);
      o.index = index;
      o.field = field;
      o.colormap = parseColormap(colormap);
      o.min = vmin;
      o.max = vmax;
      const SliceImage img = exportSlice(readSnapshot(snapshot_path), o);
      writePng(output_path, img.image, img.metadata);
      std::cout << output_path << ": " << field << " in [" << img.metadata.at("min") << ", "
                << img.metadata.at("max") << "]\n";
      return kExitOk;
    }

    if (*refr) {
      RefractionRenderOptions o;
      o.camera = refr_cam.camera();
      o.refraction.exaggeration = exaggeration;
      o.refraction.step = march_step;
      o.refraction.smoothing_passes = smoothing;
      o.checker_degrees = checker;
      const SliceImage img = renderRefraction(readSnapshot(snapshot_path), o);
      writePng(output_path, img.image, img.metadata);
      std::cout << output_path << ": max deflection " << img.metadata.at("max_deflection_degrees") << " deg\n";
      return kExitOk;
    }

    if (*parts) {
      ParticleRenderOptions o;
      o.camera = part_cam.camera();
      o.tracer_radius = radius;
      o.dust = !no_dust;
      const SliceImage img = renderParticles(readSnapshot(snapshot_path), o);
      writePng(output_path, img.image, img.metadata);
      std::cout << output_path << ": " << img.metadata.at("tracers") << " tracers, " << img.metadata.at("dust")
                << " dust\n";
      return kExitOk;
    }

    if (*probe) {
      const Index3 c = parseIndex3(voxel);
      fieldValue(VoxelState{}, field);
      std::vector<Snapshot> snaps;
      for (const fs::path& f : snapshotFiles(probe_inputs)) snaps.push_back(readSnapshot(f));
      std::stable_sort(snaps.begin(), snaps.end(), [](const Snapshot& a, const Snapshot& b) { return a.step < b.step; });
      std::cout << "step,time," << field << '\n' << std::setprecision(17);
      for (const Snapshot& s : snaps) {
        if (!s.dims.contains(c)) throw ConfigError("voxel outside the snapshot grid");
        std::cout << s.step << ',' << s.time << ',' << fieldValue(s.cells[s.dims.index(c)], field) << '\n';
      }
      return kExitOk;
    }
  } catch (const ScenarioError& e) {
    printIssues(e);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericAbort& e) {
    std::cerr << "numeric abort: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

#include "blastvox/simcli/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "blastvox/geometry/inside_test.hpp"
#include "blastvox/geometry/mesh_io.hpp"
#include "blastvox/geometry/primitives.hpp"

namespace blastvox {

namespace {

std::string joinIssues(const std::vector<ValidationIssue>& issues) {
  std::string s;
  for (const auto& i : issues) {
    if (!s.empty()) s += '\n';
    s += i.path.empty() ? i.message : i.path + ": " + i.message;
  }
  return s;
}

struct Unit {
  const char* dimension;
  double scale;
};

const std::map<std::string, Unit>& unitTable() {
  static const std::map<std::string, Unit> table = {
      {"Pa", {"pressure", 1.0}},       {"kPa", {"pressure", 1e3}},      {"MPa", {"pressure", 1e6}},
      {"bar", {"pressure", 1e5}},      {"atm", {"pressure", kAtmosphere}},
      {"K", {"temperature", 1.0}},
      {"s", {"time", 1.0}},            {"ms", {"time", 1e-3}},          {"us", {"time", 1e-6}},
      {"min", {"time", 60.0}},
      {"m", {"length", 1.0}},          {"cm", {"length", 1e-2}},        {"mm", {"length", 1e-3}},
      {"um", {"length", 1e-6}},        {"km", {"length", 1e3}},
      {"m3", {"volume", 1.0}},         {"m^3", {"volume", 1.0}},        {"L", {"volume", 1e-3}},
      {"m/s", {"velocity", 1.0}},      {"km/s", {"velocity", 1e3}},
      {"kg", {"mass", 1.0}},           {"t", {"mass", 1e3}},
      {"kg/m3", {"density", 1.0}},     {"kg/m^3", {"density", 1.0}},
  };
  return table;
}

class Reader {
 public:
  explicit Reader(std::vector<ValidationIssue>& issues) : issues_(issues) {}

  void issue(const std::string& path, const std::string& msg) { issues_.push_back({path, msg}); }

  bool isMap(const YAML::Node& n, const std::string& path) {
    if (!n || n.IsNull()) return false;
    if (!n.IsMap()) {
      issue(path, "expected a mapping");
      return false;
    }
    return true;
  }

  void allowKeys(const YAML::Node& n, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!n.IsMap()) return;
    for (const auto& kv : n) {
      const std::string key = kv.first.as<std::string>();
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        issue(join(path, key), "unknown key");
      }
    }
  }

  static std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

  template <class F>
  void scalar(const YAML::Node& parent, const char* key, const std::string& path, F&& assign) {
    const YAML::Node n = parent[key];
    if (!n || n.IsNull()) return;
    const std::string p = join(path, key);
    if (!n.IsScalar()) {
      issue(p, "expected a scalar value");
      return;
    }
    try {
      assign(n.Scalar(), p);
    } catch (const ConfigError& e) {
      issue(p, e.what());
    }
  }

  void quantity(const YAML::Node& parent, const char* key, const std::string& path, const char* dim, double& out) {
    scalar(parent, key, path, [&](const std::string& s, const std::string&) { out = parseQuantity(s, dim); });
  }

  void integer(const YAML::Node& parent, const char* key, const std::string& path, long& out) {
    scalar(parent, key, path, [&](const std::string& s, const std::string&) {
      long v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError("expected an integer, got '" + s + "'");
      out = v;
    });
  }

  template <class T>
  void integral(const YAML::Node& parent, const char* key, const std::string& path, T& out) {
    long v = static_cast<long>(out);
    integer(parent, key, path, v);
    out = static_cast<T>(v);
  }

  void boolean(const YAML::Node& parent, const char* key, const std::string& path, bool& out) {
    scalar(parent, key, path, [&](const std::string& s, const std::string&) {
      if (s == "true" || s == "yes" || s == "on") out = true;
      else if (s == "false" || s == "no" || s == "off") out = false;
      else throw ConfigError("expected true or false, got '" + s + "'");
    });
  }

  void string(const YAML::Node& parent, const char* key, const std::string& path, std::string& out) {
    scalar(parent, key, path, [&](const std::string& s, const std::string&) { out = s; });
  }

  void vec3(const YAML::Node& parent, const char* key, const std::string& path, const char* dim, Vec3& out) {
    const YAML::Node n = parent[key];
    if (!n || n.IsNull()) return;
    const std::string p = join(path, key);
    if (!n.IsSequence() || n.size() != 3) {
      issue(p, "expected a list of three values");
      return;
    }
    for (int a = 0; a < 3; ++a) {
      try {
        out[a] = parseQuantity(n[a].as<std::string>(), dim);
      } catch (const ConfigError& e) {
        issue(p + "[" + std::to_string(a) + "]", e.what());
      } catch (const YAML::Exception&) {
        issue(p + "[" + std::to_string(a) + "]", "expected a scalar value");
      }
    }
  }

 private:
  std::vector<ValidationIssue>& issues_;
};

void readShape(Reader& r, const YAML::Node& n, const std::string& path, ShapeConfig& s) {
  if (!r.isMap(n, path)) {
    r.issue(path, "a shape mapping is required");
    return;
  }
  r.allowKeys(n, path,
              {"type", "center", "min", "max", "size", "radius", "height", "width", "length", "major_radius",
               "minor_radius", "volume", "resolution", "file", "offset"});
  r.string(n, "type", path, s.type);
  r.vec3(n, "center", path, "length", s.center);
  r.vec3(n, "min", path, "length", s.lo);
  r.vec3(n, "max", path, "length", s.hi);
  if (n["size"]) {
    Vec3 size = Vec3::Zero();
    r.vec3(n, "size", path, "length", size);
    s.lo = s.center - 0.5 * size;
    s.hi = s.center + 0.5 * size;
  } else if (s.type == "box" && n["min"] && n["max"] && !n["center"]) {
    s.center = 0.5 * (s.lo + s.hi);
  }
  r.quantity(n, "radius", path, "length", s.radius);
  r.quantity(n, "height", path, "length", s.height);
  r.quantity(n, "width", path, "length", s.width);
  r.quantity(n, "length", path, "length", s.length);
  r.quantity(n, "major_radius", path, "length", s.major_radius);
  r.quantity(n, "minor_radius", path, "length", s.minor_radius);
  r.quantity(n, "volume", path, "volume", s.volume);
  r.integral(n, "resolution", path, s.resolution);
  std::string file;
  r.string(n, "file", path, file);
  if (!file.empty()) s.file = file;
  r.vec3(n, "offset", path, "length", s.offset);
  static const std::set<std::string> kinds = {"sphere", "box", "cylinder", "torus", "wedge", "mesh"};
  if (!kinds.count(s.type)) r.issue(Reader::join(path, "type"), "unknown shape type '" + s.type + "'");
  if (s.type == "mesh" && s.file.empty()) r.issue(Reader::join(path, "file"), "mesh shapes need a file");
}

void readTrigger(Reader& r, const YAML::Node& n, const std::string& path, Trigger& t) {
  if (!n || n.IsNull()) return;
  if (n.IsScalar()) {
    if (n.Scalar() == "immediate") t.kind = TriggerKind::immediate;
    else r.issue(path, "expected 'immediate' or a mapping with at_time or temperature");
    return;
  }
  if (!r.isMap(n, path)) return;
  r.allowKeys(n, path, {"at_time", "temperature"});
  if (n["at_time"] && n["temperature"]) r.issue(path, "give either at_time or temperature, not both");
  if (n["at_time"]) {
    t.kind = TriggerKind::at_time;
    r.quantity(n, "at_time", path, "time", t.time);
  }
  if (n["temperature"]) {
    t.kind = TriggerKind::temperature_threshold;
    r.quantity(n, "temperature", path, "temperature", t.temperature);
  }
}

FaceType parseFace(Reader& r, const std::string& v, const std::string& path) {
  if (v == "free") return FaceType::free;
  if (v == "hard") return FaceType::hard;
  r.issue(path, "expected free or hard, got '" + v + "'");
  return FaceType::free;
}

MotionMode parseMotion(Reader& r, const std::string& v, const std::string& path) {
  if (v == "fixed") return MotionMode::fixed;
  if (v == "dynamic") return MotionMode::dynamic;
  if (v == "kinematic") return MotionMode::kinematic;
  r.issue(path, "expected fixed, dynamic or kinematic, got '" + v + "'");
  return MotionMode::fixed;
}

void applyOverride(YAML::Node root, const std::string& key, const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError("empty override key");
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node cur = chain.back();
    const std::string& p = parts[i];
    if (cur.IsSequence()) {
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), idx);
      if (ec != std::errc{} || ptr != p.data() + p.size() || idx >= cur.size()) {
        throw ConfigError("override '" + key + "': no element '" + p + "'");
      }
      chain.push_back(cur[idx]);
    } else {
      if (!cur[p]) cur[p] = YAML::Node(YAML::NodeType::Map);
      chain.push_back(cur[p]);
    }
  }
  YAML::Node leaf = chain.back();
  const std::string& last = parts.back();
  const YAML::Node parsed = YAML::Load(value);
  if (leaf.IsSequence()) {
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(last.data(), last.data() + last.size(), idx);
    if (ec != std::errc{} || ptr != last.data() + last.size() || idx >= leaf.size()) {
      throw ConfigError("override '" + key + "': no element '" + last + "'");
    }
    leaf[idx] = parsed;
  } else {
    leaf[last] = parsed;
  }
}

}  // namespace

ScenarioError::ScenarioError(std::vector<ValidationIssue> issues)
    : ConfigError(joinIssues(issues)), issues_(std::move(issues)) {}

double parseQuantity(const std::string& text, const std::string& dimension) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr == s.data()) throw ConfigError("expected a number, got '" + text + "'");
  std::string_view unit(ptr, s.data() + s.size() - ptr);
  while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.front()))) unit.remove_prefix(1);
  if (unit.empty()) return value;
  const auto& table = unitTable();
  const auto it = table.find(std::string(unit));
  if (it == table.end()) throw ConfigError("unknown unit '" + std::string(unit) + "'");
  if (dimension != it->second.dimension) {
    throw ConfigError("unit '" + std::string(unit) + "' is a " + it->second.dimension + ", expected " +
                      (dimension == "none" ? std::string("a plain number") : dimension));
  }
  return value * it->second.scale;
}

TriangleMesh buildShape(const ShapeConfig& s) {
  TriangleMesh mesh;
  if (s.type == "sphere") mesh = makeSphere(s.center, s.radius, s.resolution);
  else if (s.type == "box") mesh = makeBox(s.lo, s.hi);
  else if (s.type == "cylinder") mesh = makeCylinder(s.center, s.radius, s.height, std::max(3, 3 * s.resolution));
  else if (s.type == "torus") mesh = makeTorus(s.center, s.major_radius, s.minor_radius, std::max(3, 3 * s.resolution),
                                             std::max(3, 2 * s.resolution));
  else if (s.type == "wedge") mesh = makeWedge(s.center, s.width, s.height, s.length);
  else if (s.type == "mesh") mesh = readMesh(s.file).translated(s.offset);
  else throw ConfigError("unknown shape type '" + s.type + "'");
  if (s.volume > 0.0) {
    Vec3 pivot = s.center;
    if (s.type == "mesh") {
      const Aabb b = mesh.bounds();
      pivot = 0.5 * (b.lo + b.hi);
    }
    mesh = scaledToVolume(mesh, s.volume, pivot);
  }
  return mesh;
}

Scenario parseScenario(const std::string& text, const std::filesystem::path& base_dir, const Overrides& overrides) {
  std::vector<ValidationIssue> issues;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ScenarioError(std::vector<ValidationIssue>{{"", std::string("YAML syntax: ") + e.what()}});
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ScenarioError(std::vector<ValidationIssue>{{"", "the scenario must be a mapping"}});
  for (const auto& [k, v] : overrides) {
    try {
      applyOverride(root, k, v);
    } catch (const std::exception& e) {
      issues.push_back({k, std::string("override: ") + e.what()});
    }
  }

  Reader r(issues);
  Scenario sc;
  sc.base_dir = base_dir;
  r.allowKeys(root, "",
              {"name", "grid", "time", "ambient", "constants", "boundary", "geometry", "charges", "bodies", "tracers",
               "dust", "refraction", "output", "probes", "seed"});
  r.string(root, "name", "", sc.name);
  r.integral(root, "seed", "", sc.seed);

  if (const YAML::Node g = root["grid"]; r.isMap(g, "grid")) {
    r.allowKeys(g, "grid", {"dims", "h", "origin"});
    if (const YAML::Node d = g["dims"]) {
      if (!d.IsSequence() || d.size() != 3) {
        r.issue("grid.dims", "expected three integers");
      } else {
        int* dst[3] = {&sc.dims.nx, &sc.dims.ny, &sc.dims.nz};
        for (int a = 0; a < 3; ++a) {
          try {
            *dst[a] = d[a].as<int>();
          } catch (const YAML::Exception&) {
            r.issue("grid.dims[" + std::to_string(a) + "]", "expected an integer");
          }
        }
      }
    }
    r.quantity(g, "h", "grid", "length", sc.h);
    r.vec3(g, "origin", "grid", "length", sc.origin);
  } else {
    r.issue("grid", "a grid section is required");
  }

  bool dt_slow_given = false;
  if (const YAML::Node t = root["time"]; r.isMap(t, "time")) {
    r.allowKeys(t, "time", {"dt", "dt_slow", "duration", "slow_regime"});
    r.quantity(t, "dt", "time", "time", sc.dt);
    dt_slow_given = static_cast<bool>(t["dt_slow"]);
    r.quantity(t, "dt_slow", "time", "time", sc.dt_slow);
    r.quantity(t, "duration", "time", "time", sc.duration);
    if (const YAML::Node s = t["slow_regime"]; r.isMap(s, "time.slow_regime")) {
      r.allowKeys(s, "time.slow_regime", {"enabled", "threshold", "quiet_steps"});
      r.boolean(s, "enabled", "time.slow_regime", sc.slow.enabled);
      r.quantity(s, "threshold", "time.slow_regime", "pressure", sc.slow.threshold);
      r.integral(s, "quiet_steps", "time.slow_regime", sc.slow.quiet_steps);
    }
  }
  if (!dt_slow_given) sc.dt_slow = 5.0 * sc.dt;

  if (const YAML::Node a = root["ambient"]; r.isMap(a, "ambient")) {
    r.allowKeys(a, "ambient", {"pressure", "temperature"});
    r.quantity(a, "pressure", "ambient", "pressure", sc.ambient_P);
    r.quantity(a, "temperature", "ambient", "temperature", sc.ambient_T);
  }

  if (const YAML::Node c = root["constants"]; r.isMap(c, "constants")) {
    r.allowKeys(c, "constants", {"mu", "k_thermal", "c_v", "R", "k_gladstone", "gravity"});
    r.quantity(c, "mu", "constants", "none", sc.consts.mu);
    r.quantity(c, "k_thermal", "constants", "none", sc.consts.k_thermal);
    r.quantity(c, "c_v", "constants", "none", sc.consts.c_v);
    r.quantity(c, "R", "constants", "none", sc.consts.R);
    r.quantity(c, "k_gladstone", "constants", "none", sc.consts.k_gladstone);
    r.vec3(c, "gravity", "constants", "none", sc.consts.g);
  }
  sc.refraction.k_gladstone = sc.consts.k_gladstone;

  bool slow_threshold_given = root["time"] && root["time"]["slow_regime"] && root["time"]["slow_regime"]["threshold"];
  if (const YAML::Node b = root["boundary"]; r.isMap(b, "boundary")) {
    r.allowKeys(b, "boundary", {"faces", "prune"});
    if (const YAML::Node f = b["faces"]; r.isMap(f, "boundary.faces")) {
      r.allowKeys(f, "boundary.faces", {"default", "x_min", "x_max", "y_min", "y_max", "z_min", "z_max"});
      std::string def;
      r.string(f, "default", "boundary.faces", def);
      if (!def.empty()) {
        const FaceType t = parseFace(r, def, "boundary.faces.default");
        sc.boundary.outer_faces.fill(t);
      }
      for (int slot = 0; slot < 6; ++slot) {
        std::string v;
        r.string(f, faceName(slot), "boundary.faces", v);
        if (!v.empty()) sc.boundary.outer_faces[slot] = parseFace(r, v, std::string("boundary.faces.") + faceName(slot));
      }
    }
    if (const YAML::Node p = b["prune"]; r.isMap(p, "boundary.prune")) {
      r.allowKeys(p, "boundary.prune", {"enabled", "threshold", "velocity"});
      r.boolean(p, "enabled", "boundary.prune", sc.boundary.prune_enabled);
      r.quantity(p, "threshold", "boundary.prune", "pressure", sc.boundary.prune_threshold);
      r.quantity(p, "velocity", "boundary.prune", "velocity", sc.boundary.prune_velocity);
    }
  }
  if (!slow_threshold_given) sc.slow.threshold = sc.boundary.prune_threshold;

  if (const YAML::Node g = root["geometry"]; r.isMap(g, "geometry")) {
    r.allowKeys(g, "geometry", {"samples", "zero_threshold", "revoxelize_fraction", "activation_radius"});
    r.integral(g, "samples", "geometry", sc.voxelize.samples);
    r.quantity(g, "zero_threshold", "geometry", "none", sc.voxelize.zero_threshold);
    r.quantity(g, "revoxelize_fraction", "geometry", "none", sc.revoxelize_fraction);
    r.integral(g, "activation_radius", "geometry", sc.force_activation_radius);
  }

  const auto resolveFile = [&](ShapeConfig& s) {
    if (!s.file.empty() && s.file.is_relative()) s.file = base_dir / s.file;
  };

  if (const YAML::Node cs = root["charges"]) {
    if (!cs.IsSequence()) {
      r.issue("charges", "expected a list");
    } else {
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string p = "charges[" + std::to_string(i) + "]";
        const YAML::Node c = cs[i];
        if (!r.isMap(c, p)) continue;
        r.allowKeys(c, p, {"name", "shape", "pressure", "temperature", "trigger"});
        ChargeConfig cc;
        cc.name = "charge" + std::to_string(i);
        r.string(c, "name", p, cc.name);
        readShape(r, c["shape"], p + ".shape", cc.shape);
        resolveFile(cc.shape);
        r.quantity(c, "pressure", p, "pressure", cc.P0);
        r.quantity(c, "temperature", p, "temperature", cc.T0);
        readTrigger(r, c["trigger"], p + ".trigger", cc.trigger);
        sc.charges.push_back(std::move(cc));
      }
    }
  }

  if (const YAML::Node bs = root["bodies"]) {
    if (!bs.IsSequence()) {
      r.issue("bodies", "expected a list");
    } else {
      for (std::size_t i = 0; i < bs.size(); ++i) {
        const std::string p = "bodies[" + std::to_string(i) + "]";
        const YAML::Node b = bs[i];
        if (!r.isMap(b, p)) continue;
        r.allowKeys(b, p, {"name", "shape", "motion", "mass", "density", "velocity", "angular_velocity", "stop_at", "forces"});
        BodyConfig bc;
        bc.name = "body" + std::to_string(i);
        r.string(b, "name", p, bc.name);
        readShape(r, b["shape"], p + ".shape", bc.shape);
        resolveFile(bc.shape);
        std::string motion;
        r.string(b, "motion", p, motion);
        if (!motion.empty()) bc.motion = parseMotion(r, motion, p + ".motion");
        r.quantity(b, "mass", p, "mass", bc.mass);
        r.quantity(b, "density", p, "density", bc.density);
        r.vec3(b, "velocity", p, "velocity", bc.velocity);
        r.vec3(b, "angular_velocity", p, "none", bc.angular_velocity);
        r.quantity(b, "stop_at", p, "time", bc.stop_time);
        if (const YAML::Node f = b["forces"]; r.isMap(f, p + ".forces")) {
          r.allowKeys(f, p + ".forces", {"file", "every"});
          std::string file;
          r.string(f, "file", p + ".forces", file);
          bc.force_file = file;
          r.integral(f, "every", p + ".forces", bc.force_every);
        }
        sc.bodies.push_back(std::move(bc));
      }
    }
  }

  if (const YAML::Node t = root["tracers"]; r.isMap(t, "tracers")) {
    r.allowKeys(t, "tracers", {"count", "charge", "wavelengths", "reference_temperature", "alpha_start", "alpha_full"});
    r.integral(t, "count", "tracers", sc.tracers.count);
    r.string(t, "charge", "tracers", sc.tracers.charge);
    Vec3 w(sc.tracers.colors.wavelengths[0], sc.tracers.colors.wavelengths[1], sc.tracers.colors.wavelengths[2]);
    r.vec3(t, "wavelengths", "tracers", "length", w);
    sc.tracers.colors.wavelengths = {w[0], w[1], w[2]};
    r.quantity(t, "reference_temperature", "tracers", "temperature", sc.tracers.colors.reference_temperature);
    r.quantity(t, "alpha_start", "tracers", "temperature", sc.tracers.colors.alpha_start);
    r.quantity(t, "alpha_full", "tracers", "temperature", sc.tracers.colors.alpha_full);
  }

  if (const YAML::Node d = root["dust"]; r.isMap(d, "dust")) {
    r.allowKeys(d, "dust", {"rate", "threshold", "median_diameter", "sigma_log", "density", "weight"});
    r.quantity(d, "rate", "dust", "none", sc.dust.rate);
    r.quantity(d, "threshold", "dust", "pressure", sc.dust.overpressure_threshold);
    r.quantity(d, "median_diameter", "dust", "length", sc.dust.median_diameter);
    r.quantity(d, "sigma_log", "dust", "none", sc.dust.sigma_log);
    r.quantity(d, "density", "dust", "density", sc.dust.density);
    r.quantity(d, "weight", "dust", "none", sc.dust.weight);
  }

  if (const YAML::Node f = root["refraction"]; r.isMap(f, "refraction")) {
    r.allowKeys(f, "refraction", {"exaggeration", "step", "bend_threshold", "smoothing"});
    r.quantity(f, "exaggeration", "refraction", "none", sc.refraction.exaggeration);
    r.quantity(f, "step", "refraction", "length", sc.refraction.step);
    r.quantity(f, "bend_threshold", "refraction", "none", sc.refraction.bend_threshold);
    r.integral(f, "smoothing", "refraction", sc.refraction.smoothing_passes);
  }

  if (const YAML::Node o = root["output"]; r.isMap(o, "output")) {
    r.allowKeys(o, "output", {"directory", "snapshot_every", "compress", "tracks"});
    std::string dir;
    r.string(o, "directory", "output", dir);
    if (!dir.empty()) sc.output.directory = dir;
    r.quantity(o, "snapshot_every", "output", "time", sc.output.snapshot_interval);
    r.boolean(o, "compress", "output", sc.output.compress);
    r.boolean(o, "tracks", "output", sc.output.tracks);
  }
  if (sc.output.directory.is_relative()) sc.output.directory = base_dir / sc.output.directory;

  if (const YAML::Node ps = root["probes"]) {
    if (!ps.IsSequence()) {
      r.issue("probes", "expected a list");
    } else {
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::string p = "probes[" + std::to_string(i) + "]";
        if (!r.isMap(ps[i], p)) continue;
        r.allowKeys(ps[i], p, {"name", "position"});
        ProbeConfig pc;
        pc.name = "probe" + std::to_string(i);
        r.string(ps[i], "name", p, pc.name);
        r.vec3(ps[i], "position", p, "length", pc.position);
        sc.probes.push_back(pc);
      }
    }
  }

  for (auto& issue : validateScenario(sc)) issues.push_back(std::move(issue));
  if (!issues.empty()) throw ScenarioError(std::move(issues));
  return sc;
}

Scenario loadScenario(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parseScenario(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."), overrides);
}

std::vector<ValidationIssue> validateScenario(const Scenario& sc) {
  std::vector<ValidationIssue> out;
  const auto bad = [&](std::string path, std::string msg) { out.push_back({std::move(path), std::move(msg)}); };
  if (sc.dims.nx <= 0 || sc.dims.ny <= 0 || sc.dims.nz <= 0) bad("grid.dims", "dimensions must be positive");
  if (!(sc.h > 0.0)) bad("grid.h", "voxel width must be positive");
  if (!(sc.dt > 0.0)) bad("time.dt", "dt must be positive");
  if (!(sc.dt_slow > 0.0)) bad("time.dt_slow", "dt_slow must be positive");
  if (!(sc.duration > 0.0)) bad("time.duration", "duration must be positive");
  if (sc.slow.quiet_steps < 1) bad("time.slow_regime.quiet_steps", "must be at least 1");
  if (sc.slow.threshold < 0.0) bad("time.slow_regime.threshold", "must be non-negative");
  if (!(sc.ambient_P > 0.0)) bad("ambient.pressure", "ambient pressure must be positive");
  if (!(sc.ambient_T > 0.0)) bad("ambient.temperature", "ambient temperature must be positive");
  try {
    sc.consts.validate();
  } catch (const ConfigError& e) {
    bad("constants", e.what());
  }
  try {
    sc.boundary.validate();
  } catch (const ConfigError& e) {
    bad("boundary.prune", e.what());
  }
  if (sc.voxelize.samples < 1) bad("geometry.samples", "must be at least 1");
  if (sc.voxelize.zero_threshold < 0.0 || sc.voxelize.zero_threshold >= 1.0) {
    bad("geometry.zero_threshold", "must lie in [0, 1)");
  }
  if (!(sc.revoxelize_fraction > 0.0)) bad("geometry.revoxelize_fraction", "must be positive");
  if (sc.force_activation_radius < 0) bad("geometry.activation_radius", "must be non-negative");
  if (sc.output.snapshot_interval < 0.0) bad("output.snapshot_every", "must be non-negative");

  const bool grid_ok = sc.dims.nx > 0 && sc.dims.ny > 0 && sc.dims.nz > 0 && sc.h > 0.0;
  const Vec3 lo = sc.origin;
  const Vec3 hi = sc.origin + sc.h * Vec3(sc.dims.nx, sc.dims.ny, sc.dims.nz);
  const auto insideGrid = [&](const Aabb& b) {
    return (b.lo.array() >= lo.array()).all() && (b.hi.array() <= hi.array()).all();
  };

  std::vector<TriangleMesh> body_meshes(sc.bodies.size());
  std::set<std::string> names;
  for (std::size_t i = 0; i < sc.bodies.size(); ++i) {
    const BodyConfig& b = sc.bodies[i];
    const std::string p = "bodies[" + std::to_string(i) + "]";
    if (!names.insert("body:" + b.name).second) bad(p + ".name", "duplicate body name '" + b.name + "'");
    try {
      body_meshes[i] = buildShape(b.shape);
      body_meshes[i].validateManifold();
      if (!(body_meshes[i].signedVolume() > 0.0)) bad(p + ".shape", "body '" + b.name + "' encloses no volume");
    } catch (const std::exception& e) {
      bad(p + ".shape", "body '" + b.name + "': " + e.what());
      body_meshes[i] = {};
    }
    if (b.motion != MotionMode::fixed && !(b.mass > 0.0) && !(b.density > 0.0)) {
      bad(p, "movable body '" + b.name + "' needs a positive mass or density");
    }
    if (b.mass < 0.0 || b.density < 0.0) bad(p, "mass and density must be non-negative");
    if (b.force_every < 1) bad(p + ".forces.every", "must be at least 1");
  }

  for (std::size_t i = 0; i < sc.charges.size(); ++i) {
    const ChargeConfig& c = sc.charges[i];
    const std::string p = "charges[" + std::to_string(i) + "]";
    if (!names.insert("charge:" + c.name).second) bad(p + ".name", "duplicate charge name '" + c.name + "'");
    if (!(c.P0 > sc.ambient_P)) bad(p + ".pressure", "charge '" + c.name + "' pressure must exceed ambient");
    if (!(c.T0 > 0.0)) bad(p + ".temperature", "charge '" + c.name + "' temperature must be positive");
    if (c.trigger.kind == TriggerKind::at_time && c.trigger.time < 0.0) {
      bad(p + ".trigger.at_time", "must be non-negative");
    }
    if (c.trigger.kind == TriggerKind::temperature_threshold && !(c.trigger.temperature > 0.0)) {
      bad(p + ".trigger.temperature", "must be positive");
    }
    TriangleMesh mesh;
    try {
      mesh = buildShape(c.shape);
      mesh.validateManifold();
    } catch (const std::exception& e) {
      bad(p + ".shape", "charge '" + c.name + "': " + e.what());
      continue;
    }
    if (grid_ok && !insideGrid(mesh.bounds())) bad(p + ".shape", "charge '" + c.name + "' lies outside the grid");
    const Aabb cb = mesh.bounds();
    for (std::size_t b = 0; b < body_meshes.size(); ++b) {
      if (body_meshes[b].empty()) continue;
      const InsideTester inside(body_meshes[b]);
      const InsideTester charge_inside(mesh);
      bool overlap = false;
      for (const Vec3& v : mesh.vertices) overlap = overlap || inside.inside(v);
      for (const Vec3& v : body_meshes[b].vertices) overlap = overlap || charge_inside.inside(v);
      overlap = overlap || inside.inside(0.5 * (cb.lo + cb.hi));
      if (overlap) {
        bad(p + ".shape", "charge '" + c.name + "' overlaps body '" + sc.bodies[b].name + "'");
      }
    }
  }
  if (sc.tracers.count > 0) {
    const bool found = std::any_of(sc.charges.begin(), sc.charges.end(),
                                   [&](const ChargeConfig& c) { return c.name == sc.tracers.charge; });
    if (!found) bad("tracers.charge", "no charge named '" + sc.tracers.charge + "'");
  }
  for (std::size_t i = 0; i < sc.probes.size(); ++i) {
    const Vec3& q = sc.probes[i].position;
    if (grid_ok && ((q.array() < lo.array()).any() || (q.array() > hi.array()).any())) {
      bad("probes[" + std::to_string(i) + "].position", "probe '" + sc.probes[i].name + "' lies outside the grid");
    }
  }
  return out;
}

}  // namespace blastvox

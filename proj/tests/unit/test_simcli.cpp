#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "blastvox/errors.hpp"
#include "blastvox/simcli/colormap.hpp"
#include "blastvox/simcli/image.hpp"
#include "blastvox/simcli/scenario.hpp"
#include "blastvox/simcli/simulation.hpp"
#include "blastvox/simcli/slice.hpp"
#include "blastvox/simcli/snapshot.hpp"

namespace blastvox {
namespace {

namespace fs = std::filesystem;

fs::path scenarioPath(const std::string& name) { return fs::path(BLASTVOX_SCENARIO_DIR) / name; }

const char* kSmall = R"(
name: small
grid: {dims: [12, 12, 12], h: 0.5 m}
time: {dt: 0.05 ms, duration: 1 ms}
boundary: {faces: {default: free, z_min: hard}}
charges:
  - name: c
    shape: {type: sphere, center: [3, 3, 1.5], radius: 0.6 m, resolution: 6}
    pressure: 50 atm
    temperature: 1500 K
output: {snapshot_every: 0.25 ms}
)";

Scenario quiet(const std::string& extra = "") {
  Scenario sc = parseScenario(std::string(R"(
name: quiet
grid: {dims: [8, 8, 8], h: 1 m}
time: {dt: 0.1 ms, duration: 2 ms}
output: {snapshot_every: 0.5 ms}
)") + extra);
  sc.output.write_outputs = false;
  return sc;
}

bool hasIssue(const ScenarioError& e, const std::string& path, const std::string& text) {
  return std::any_of(e.issues().begin(), e.issues().end(), [&](const ValidationIssue& i) {
    return i.path == path && i.message.find(text) != std::string::npos;
  });
}

TEST(Quantity, Units) {
  EXPECT_DOUBLE_EQ(parseQuantity("1000 atm", "pressure"), 1000.0 * kAtmosphere);
  EXPECT_DOUBLE_EQ(parseQuantity("0.01 ms", "time"), 1e-5);
  EXPECT_DOUBLE_EQ(parseQuantity("0.2 m", "length"), 0.2);
  EXPECT_DOUBLE_EQ(parseQuantity("20 cm", "length"), 0.2);
  EXPECT_DOUBLE_EQ(parseQuantity("9.1e7 m3", "volume"), 9.1e7);
  EXPECT_DOUBLE_EQ(parseQuantity("  290 K ", "temperature"), 290.0);
  EXPECT_DOUBLE_EQ(parseQuantity("3.5", "length"), 3.5);
  EXPECT_THROW(parseQuantity("3 atm", "length"), ConfigError);
  EXPECT_THROW(parseQuantity("3 furlong", "length"), ConfigError);
  EXPECT_THROW(parseQuantity("fast", "time"), ConfigError);
}

TEST(Scenario, DefaultsAndSlowStep) {
  const Scenario sc = parseScenario(kSmall);
  EXPECT_EQ(sc.dims, (GridDims{12, 12, 12}));
  EXPECT_DOUBLE_EQ(sc.dt, 5e-5);
  EXPECT_DOUBLE_EQ(sc.dt_slow, 5.0 * sc.dt);
  EXPECT_EQ(sc.boundary.outer_faces[faceSlot(2, -1)], FaceType::hard);
  EXPECT_EQ(sc.boundary.outer_faces[faceSlot(2, +1)], FaceType::free);
  EXPECT_DOUBLE_EQ(sc.boundary.prune_threshold, 10.0);
  EXPECT_DOUBLE_EQ(sc.boundary.prune_velocity, 1e-3);
  ASSERT_EQ(sc.charges.size(), 1u);
  EXPECT_DOUBLE_EQ(sc.charges[0].P0, 50.0 * kAtmosphere);
}

TEST(Scenario, Overrides) {
  const Scenario sc = parseScenario(kSmall, ".", {{"time.dt", "0.02 ms"}, {"grid.h", "0.6 m"}});
  EXPECT_DOUBLE_EQ(sc.dt, 2e-5);
  EXPECT_DOUBLE_EQ(sc.h, 0.6);
}

TEST(Scenario, ZeroStepRejected) {
  try {
    parseScenario(kSmall, ".", {{"time.dt", "0 ms"}});
    FAIL() << "dt = 0 accepted";
  } catch (const ScenarioError& e) {
    EXPECT_TRUE(hasIssue(e, "time.dt", "dt must be positive")) << e.what();
  }
}

TEST(Scenario, ChargeOutsideGridNamed) {
  std::string text = kSmall;
  text.replace(text.find("[3, 3, 1.5]"), 11, "[30, 3, 1.5]");
  try {
    parseScenario(text);
    FAIL() << "charge outside the grid accepted";
  } catch (const ScenarioError& e) {
    EXPECT_TRUE(hasIssue(e, "charges[0].shape", "charge 'c'")) << e.what();
  }
}

TEST(Scenario, ReportsEveryProblemWithPaths) {
  try {
    parseScenario("grid: {dims: [0, 4, 4], h: -1 m}\ntime: {dt: 1 ms, duration: 0 s}\nbogus: 1\n");
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_TRUE(hasIssue(e, "grid.dims", "positive"));
    EXPECT_TRUE(hasIssue(e, "grid.h", "positive"));
    EXPECT_TRUE(hasIssue(e, "time.duration", "positive"));
    EXPECT_TRUE(hasIssue(e, "bogus", "unknown key"));
  }
}

struct Row {
  const char* file;
  double h;
  double dt;
  double duration;
  double volume;
  double P0;
  double T0;
};

TEST(Scenario, TableRowsAreValid) {
  const Row rows[] = {
      {"projectile.yaml", 1.0, 1e-4, 0.45, 73.6, 1000.0, 2900.0},
      {"barrier.yaml", 0.2, 1e-5, 0.025, 0.52, 1000.0, 2900.0},
      {"shapes.yaml", 1.0, 1e-4, 0.03, 1000.0, 1000.0, 2900.0},
      {"fracture.yaml", 0.2, 2e-5, 0.02, 0.52, 1000.0, 2900.0},
      {"fireball.yaml", 1.0, 1e-4, 1.0, 65.4, 1000.0, 2900.0},
      {"corner.yaml", 1.0, 1e-4, 10.0, 268.08, 1000.0, 2900.0},
      {"city.yaml", 1.0, 1e-4, 5.0, 65.4, 1000.0, 2900.0},
      {"nuclear.yaml", 50.0, 5e-4, 30.0, 9.1e7, 345.0, 1e5},
  };
  for (const Row& r : rows) {
    SCOPED_TRACE(r.file);
    Scenario sc;
    ASSERT_NO_THROW(sc = loadScenario(scenarioPath(r.file)));
    EXPECT_TRUE(validateScenario(sc).empty());
    EXPECT_EQ(sc.dims, (GridDims{101, 101, 101}));
    EXPECT_DOUBLE_EQ(sc.h, r.h);
    EXPECT_DOUBLE_EQ(sc.dt, r.dt);
    EXPECT_DOUBLE_EQ(sc.dt_slow, 5.0 * r.dt);
    EXPECT_DOUBLE_EQ(sc.duration, r.duration);
    ASSERT_FALSE(sc.charges.empty());
    for (const ChargeConfig& c : sc.charges) {
      EXPECT_NEAR(buildShape(c.shape).signedVolume(), r.volume, 1e-9 * r.volume);
      EXPECT_DOUBLE_EQ(c.P0, r.P0 * kAtmosphere);
      EXPECT_DOUBLE_EQ(c.T0, r.T0);
    }
  }
}

TEST(Colormap, Endpoints) {
  EXPECT_EQ(parseColormap("hot"), Colormap::hot);
  EXPECT_EQ(parseColormap("grey"), Colormap::gray);
  EXPECT_THROW(parseColormap("jet"), ConfigError);
  EXPECT_EQ(mapColor(Colormap::hot, 0.0), (std::array<std::uint8_t, 3>{0, 0, 0}));
  EXPECT_EQ(mapColor(Colormap::hot, 1.0), (std::array<std::uint8_t, 3>{255, 255, 255}));
  EXPECT_EQ(mapColor(Colormap::gray, 0.5), (std::array<std::uint8_t, 3>{128, 128, 128}));
  EXPECT_EQ(mapColor(Colormap::gray, -3.0), mapColor(Colormap::gray, 0.0));
  EXPECT_EQ(mapColor(Colormap::gray, 7.0), mapColor(Colormap::gray, 1.0));
}

Snapshot sampleSnapshot() {
  PhysicalConstants k;
  FluidGrid g({5, 4, 3}, 0.25, Vec3(1.0, -2.0, 0.5));
  initAmbient(g, kAtmosphere, 290.0, k);
  for (std::size_t i = 0; i < g.size(); ++i) {
    VoxelState& c = g.at(i);
    c.v = Vec3(0.1 * i, -1.0 / (i + 1.0), 1e-300 * i);
    c.N += i * 1.000001;
    syncInPlace(c, k);
  }
  g.at(7).partial_volume = 0.0;
  g.at(7).flag = CellFlag::hard_boundary;
  Snapshot s = Snapshot::fromGrid(g, 0.0125, 1250);
  TracerParticle t;
  t.id = 3;
  t.position = Vec3(1.1, -1.5, 0.7);
  t.temperature = 1800.0;
  s.tracers.push_back(t);
  return s;
}

void expectSameCells(const Snapshot& a, const Snapshot& b) {
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].rho, b.cells[i].rho);
    EXPECT_EQ(a.cells[i].v, b.cells[i].v);
    EXPECT_EQ(a.cells[i].N, b.cells[i].N);
    EXPECT_EQ(a.cells[i].T, b.cells[i].T);
    EXPECT_EQ(a.cells[i].P, b.cells[i].P);
    EXPECT_EQ(a.cells[i].partial_volume, b.cells[i].partial_volume);
    EXPECT_EQ(a.cells[i].flag, b.cells[i].flag);
  }
}

TEST(Snapshot, RoundTripIsBitExact) {
  const Snapshot s = sampleSnapshot();
  for (const bool compress : {false, true}) {
    SCOPED_TRACE(compress);
    const auto bytes = encodeSnapshot(s, compress);
    const Snapshot back = decodeSnapshot(bytes);
    EXPECT_EQ(back.dims, s.dims);
    EXPECT_EQ(back.h, s.h);
    EXPECT_EQ(back.origin, s.origin);
    EXPECT_EQ(back.time, s.time);
    EXPECT_EQ(back.step, s.step);
    expectSameCells(s, back);
    ASSERT_EQ(back.tracers.size(), 1u);
    EXPECT_EQ(back.tracers[0].position, s.tracers[0].position);
    EXPECT_EQ(encodeSnapshot(back, compress), bytes);
  }
}

TEST(Snapshot, FileRoundTrip) {
  const Snapshot s = sampleSnapshot();
  const fs::path p = fs::temp_directory_path() / "blastvox_snapshot_test.bvs";
  writeSnapshot(p, s, true);
  const Snapshot back = readSnapshot(p);
  fs::remove(p);
  expectSameCells(s, back);
  EXPECT_THROW(readSnapshot(p), IoError);
}

TEST(Snapshot, CorruptionDetected) {
  auto bytes = encodeSnapshot(sampleSnapshot());
  bytes[bytes.size() / 2] ^= 0x10;
  EXPECT_THROW(decodeSnapshot(bytes), IoError);
  auto truncated = encodeSnapshot(sampleSnapshot());
  truncated.resize(truncated.size() - 9);
  EXPECT_THROW(decodeSnapshot(truncated), IoError);
  std::vector<std::uint8_t> junk(64, 0x42);
  EXPECT_THROW(decodeSnapshot(junk), IoError);
}

TEST(Snapshot, FieldLookup) {
  VoxelState c;
  c.rho = 1.5;
  c.v = Vec3(3.0, 4.0, 0.0);
  EXPECT_EQ(fieldValue(c, "rho"), 1.5);
  EXPECT_EQ(fieldValue(c, "speed"), 5.0);
  EXPECT_THROW(fieldValue(c, "colour"), ConfigError);
  const auto& names = snapshotFieldNames();
  EXPECT_NE(std::find(names.begin(), names.end(), "P"), names.end());
}

TEST(Png, MetadataRoundTrip) {
  Image8 img(3, 2);
  img.pixel(2, 1)[0] = 200;
  img.pixel(0, 1)[2] = 17;
  const fs::path p = fs::temp_directory_path() / "blastvox_png_test.png";
  writePng(p, img, {{"field", "P"}, {"time", "0.0125"}});
  const DecodedPng back = readPng(p);
  fs::remove(p);
  EXPECT_EQ(back.image.width, 3);
  EXPECT_EQ(back.image.height, 2);
  EXPECT_EQ(back.image.rgb, img.rgb);
  EXPECT_EQ(back.metadata.at("field"), "P");
  EXPECT_EQ(back.metadata.at("time"), "0.0125");
}

TEST(Slice, AmbientIsConstantColour) {
  PhysicalConstants k;
  FluidGrid g({6, 5, 4}, 1.0);
  initAmbient(g, kAtmosphere, 290.0, k);
  const Snapshot s = Snapshot::fromGrid(g, 0.0, 0);
  SliceOptions o;
  o.axis = 2;
  o.index = 1;
  const SliceImage img = exportSlice(s, o);
  EXPECT_EQ(img.image.width, 6);
  EXPECT_EQ(img.image.height, 5);
  for (std::size_t i = 3; i < img.image.rgb.size(); ++i) EXPECT_EQ(img.image.rgb[i], img.image.rgb[i % 3]);
  EXPECT_EQ(img.metadata.at("field"), "P");
  EXPECT_EQ(img.metadata.at("axis"), "z");
  EXPECT_EQ(img.metadata.at("index"), "1");
  EXPECT_EQ(img.metadata.at("colormap"), "hot");
}

TEST(Slice, SolidsAndRange) {
  const Snapshot s = sampleSnapshot();
  SliceOptions o;
  o.axis = 2;
  o.index = 0;
  o.field = "rho";
  const SliceImage img = exportSlice(s, o);
  const Index3 c = s.dims.coord(7);
  ASSERT_EQ(c.k, 0);
  const std::uint8_t* px = img.image.pixel(c.i, img.image.height - 1 - c.j);
  const std::uint8_t* alt = img.image.pixel(c.i, c.j);
  const bool solid = std::equal(kSolidColor.begin(), kSolidColor.end(), px) ||
                     std::equal(kSolidColor.begin(), kSolidColor.end(), alt);
  EXPECT_TRUE(solid);
  EXPECT_EQ(exportSlice(s, o).image.rgb, img.image.rgb);
  o.index = 3;
  EXPECT_THROW(exportSlice(s, o), ConfigError);
  o.index = 0;
  o.axis = 3;
  EXPECT_THROW(exportSlice(s, o), ConfigError);
}

std::vector<std::vector<std::uint8_t>> runCollect(Simulation& sim, std::optional<double> stop = std::nullopt,
                                                  std::vector<std::uint8_t>* checkpoint = nullptr) {
  std::vector<std::vector<std::uint8_t>> seq;
  sim.setSnapshotSink([&](const Snapshot& s, bool is_checkpoint) {
    if (is_checkpoint) {
      if (checkpoint) *checkpoint = encodeSnapshot(s);
    } else {
      seq.push_back(encodeSnapshot(s));
    }
  });
  sim.run(stop);
  return seq;
}

TEST(Simulation, QuietScenarioStaysAmbient) {
  Scenario sc = quiet();
  sc.consts.g = Vec3::Zero();
  Simulation sim(sc);
  const auto seq = runCollect(sim);
  ASSERT_GE(seq.size(), 4u);
  const Snapshot first = decodeSnapshot(seq.front());
  for (const auto& bytes : seq) expectSameCells(first, decodeSnapshot(bytes));
}

TEST(Simulation, ResumeMatchesFullRun) {
  Scenario sc = parseScenario(kSmall);
  sc.output.write_outputs = false;
  Simulation full(sc);
  const auto base = runCollect(full);
  std::vector<std::uint8_t> checkpoint;
  Simulation first(sc);
  auto split = runCollect(first, 0.5e-3, &checkpoint);
  ASSERT_FALSE(checkpoint.empty());
  Simulation second(sc, decodeSnapshot(checkpoint));
  const auto rest = runCollect(second);
  split.insert(split.end(), rest.begin(), rest.end());
  ASSERT_EQ(split.size(), base.size());
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_EQ(split[i], base[i]) << "snapshot " << i;
}

TEST(Simulation, NonFiniteAborts) {
  PhysicalConstants k;
  FluidGrid g({3, 3, 3}, 1.0);
  initAmbient(g, kAtmosphere, 290.0, k);
  EXPECT_FALSE(Simulation::findNonFinite(g, 4).has_value());
  g.at(13).P = std::numeric_limits<double>::quiet_NaN();
  const auto err = Simulation::findNonFinite(g, 4);
  ASSERT_TRUE(err.has_value());
  EXPECT_EQ(err->voxel(), 13u);
  EXPECT_EQ(err->step(), 4u);
}

TEST(Simulation, ChargeFires) {
  Scenario sc = parseScenario(kSmall);
  sc.output.write_outputs = false;
  sc.duration = 0.1e-3;
  Simulation sim(sc);
  sim.run();
  EXPECT_TRUE(sim.chargeFired(0));
  double peak = 0.0;
  for (const auto& c : sim.grid().current()) peak = std::max(peak, c.P);
  EXPECT_GT(peak, 5.0 * kAtmosphere);
  EXPECT_EQ(sim.stepIndex(), 2u);
}

}  // namespace
}  // namespace blastvox

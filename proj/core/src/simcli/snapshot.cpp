#include "blastvox/simcli/snapshot.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>

#include "blastvox/errors.hpp"

namespace blastvox {

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot encoding assumes a little-endian host");

constexpr char kMagic[8] = {'B', 'V', 'X', 'S', 'N', 'A', 'P', '\0'};
constexpr std::uint32_t kFlagCompressed = 1;

class Writer {
 public:
  std::vector<std::uint8_t> bytes;

  template <class T>
  void put(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    bytes.insert(bytes.end(), p, p + sizeof(T));
  }
  void putVec(const Vec3& v) {
    put(v.x());
    put(v.y());
    put(v.z());
  }
  void putQuat(const Quat& q) {
    put(q.w());
    put(q.x());
    put(q.y());
    put(q.z());
  }
  void putString(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    bytes.insert(bytes.end(), s.begin(), s.end());
  }
  void putBytes(std::span<const std::uint8_t> b) { bytes.insert(bytes.end(), b.begin(), b.end()); }
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : bytes_(b) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  Vec3 getVec() {
    Vec3 v;
    v.x() = get<double>();
    v.y() = get<double>();
    v.z() = get<double>();
    return v;
  }
  Quat getQuat() {
    const double w = get<double>();
    const double x = get<double>();
    const double y = get<double>();
    const double z = get<double>();
    return Quat(w, x, y, z);
  }
  std::string getString() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t position() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw IoError("snapshot truncated");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct FieldDesc {
  const char* name;
  std::uint8_t type;  // 0 = f64, 1 = u8
};

constexpr FieldDesc kFields[] = {{"rho", 0}, {"vx", 0}, {"vy", 0}, {"vz", 0}, {"N", 0},
                                 {"T", 0},   {"P", 0},  {"partial_volume", 0}, {"flag", 1}};

std::vector<std::uint8_t> encodePayload(const std::vector<VoxelState>& cells) {
  Writer w;
  w.bytes.reserve(cells.size() * (8 * 8 + 1));
  for (int f = 0; f < 8; ++f) {
    for (const VoxelState& c : cells) {
      switch (f) {
        case 0: w.put(c.rho); break;
        case 1: w.put(c.v.x()); break;
        case 2: w.put(c.v.y()); break;
        case 3: w.put(c.v.z()); break;
        case 4: w.put(c.N); break;
        case 5: w.put(c.T); break;
        case 6: w.put(c.P); break;
        default: w.put(c.partial_volume); break;
      }
    }
  }
  for (const VoxelState& c : cells) w.put(static_cast<std::uint8_t>(c.flag));
  return std::move(w.bytes);
}

void decodePayload(std::span<const std::uint8_t> raw, std::vector<VoxelState>& cells) {
  Reader r(raw);
  for (int f = 0; f < 8; ++f) {
    for (VoxelState& c : cells) {
      const double v = r.get<double>();
      switch (f) {
        case 0: c.rho = v; break;
        case 1: c.v.x() = v; break;
        case 2: c.v.y() = v; break;
        case 3: c.v.z() = v; break;
        case 4: c.N = v; break;
        case 5: c.T = v; break;
        case 6: c.P = v; break;
        default: c.partial_volume = v; break;
      }
    }
  }
  for (VoxelState& c : cells) {
    const auto flag = r.get<std::uint8_t>();
    if (flag > 3) throw IoError("snapshot has an invalid voxel flag");
    c.flag = static_cast<CellFlag>(flag);
  }
  if (!r.done()) throw IoError("snapshot payload has trailing bytes");
}

void putBlock(Writer& w, const char tag[4], const Writer& body) {
  w.bytes.insert(w.bytes.end(), tag, tag + 4);
  w.put(static_cast<std::uint64_t>(body.bytes.size()));
  w.putBytes(body.bytes);
}

void putDiagnostics(Writer& w, const StepDiagnostics& d) {
  w.put(d.density_clamps);
  w.put(d.energy_clamps);
  w.put(d.limited_donors);
  w.put(d.vacuum_events);
  w.put(d.max_speed);
  w.put(d.max_pressure);
  w.put(d.max_cfl);
}

StepDiagnostics getDiagnostics(Reader& r) {
  StepDiagnostics d;
  d.density_clamps = r.get<std::uint64_t>();
  d.energy_clamps = r.get<std::uint64_t>();
  d.limited_donors = r.get<std::uint64_t>();
  d.vacuum_events = r.get<std::uint64_t>();
  d.max_speed = r.get<double>();
  d.max_pressure = r.get<double>();
  d.max_cfl = r.get<double>();
  return d;
}

}  // namespace

const std::vector<std::string>& snapshotFieldNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& f : kFields) n.emplace_back(f.name);
    return n;
  }();
  return names;
}

double fieldValue(const VoxelState& c, const std::string& field) {
  if (field == "rho") return c.rho;
  if (field == "vx") return c.v.x();
  if (field == "vy") return c.v.y();
  if (field == "vz") return c.v.z();
  if (field == "speed") return c.v.norm();
  if (field == "N") return c.N;
  if (field == "T") return c.T;
  if (field == "P") return c.P;
  if (field == "partial_volume") return c.partial_volume;
  if (field == "flag") return static_cast<double>(c.flag);
  throw ConfigError("unknown field '" + field + "' (expected rho, vx, vy, vz, speed, N, T, P, partial_volume, flag)");
}

Snapshot Snapshot::fromGrid(const FluidGrid& grid, double time, std::uint64_t step) {
  Snapshot s;
  s.dims = grid.dims();
  s.h = grid.h();
  s.origin = grid.origin();
  s.time = time;
  s.step = step;
  s.ambient_P = grid.ambientP();
  s.ambient_T = grid.ambientT();
  const auto cells = grid.current();
  s.cells.assign(cells.begin(), cells.end());
  return s;
}

FluidGrid Snapshot::toGrid() const {
  FluidGrid g(dims, h, origin);
  g.setAmbient(ambient_P, ambient_T);
  std::copy(cells.begin(), cells.end(), g.current().begin());
  g.mirrorToNext();
  return g;
}

std::vector<std::uint8_t> encodeSnapshot(const Snapshot& s, bool compress) {
  if (s.cells.size() != s.dims.count()) throw IoError("snapshot cell count does not match its dimensions");
  Writer w;
  w.bytes.insert(w.bytes.end(), kMagic, kMagic + 8);
  w.put(kSnapshotVersion);
  w.put(compress ? kFlagCompressed : 0u);
  w.put(static_cast<std::int32_t>(s.dims.nx));
  w.put(static_cast<std::int32_t>(s.dims.ny));
  w.put(static_cast<std::int32_t>(s.dims.nz));
  w.put(s.h);
  w.putVec(s.origin);
  w.put(s.time);
  w.put(s.step);
  w.put(s.ambient_P);
  w.put(s.ambient_T);
  w.put(static_cast<std::uint32_t>(std::size(kFields)));
  for (const auto& f : kFields) {
    const std::string name = f.name;
    w.put(static_cast<std::uint8_t>(name.size()));
    w.bytes.insert(w.bytes.end(), name.begin(), name.end());
    w.put(f.type);
  }

  std::vector<std::uint8_t> raw = encodePayload(s.cells);
  std::vector<std::uint8_t> stored;
  if (compress) {
    uLongf len = compressBound(static_cast<uLong>(raw.size()));
    stored.resize(len);
    if (compress2(stored.data(), &len, raw.data(), static_cast<uLong>(raw.size()), Z_BEST_SPEED) != Z_OK) {
      throw IoError("snapshot compression failed");
    }
    stored.resize(len);
  } else {
    stored = std::move(raw);
    raw.clear();
  }
  const std::uint64_t raw_size = s.cells.size() * (8 * 8 + 1);
  w.put(static_cast<std::uint64_t>(stored.size()));
  w.put(raw_size);
  w.putBytes(stored);

  if (!s.tracers.empty()) {
    Writer b;
    b.put(static_cast<std::uint64_t>(s.tracers.size()));
    for (const TracerParticle& t : s.tracers) {
      b.put(t.id);
      b.putVec(t.position);
      b.put(t.temperature);
      b.put(t.color.r);
      b.put(t.color.g);
      b.put(t.color.b);
      b.put(t.color.a);
      b.put(static_cast<std::uint8_t>(t.frozen));
    }
    putBlock(w, "TRCR", b);
  }
  if (!s.dust.empty()) {
    Writer b;
    b.put(static_cast<std::uint64_t>(s.dust.size()));
    for (const DustMetaParticle& d : s.dust) {
      b.put(d.id);
      b.putVec(d.center);
      b.putVec(d.velocity);
      b.put(d.variance);
      b.put(d.diameter);
      b.put(d.weight);
      b.put(static_cast<std::uint8_t>(d.frozen));
    }
    putBlock(w, "DUST", b);
  }
  if (!s.bodies.empty()) {
    Writer b;
    b.put(static_cast<std::uint32_t>(s.bodies.size()));
    for (const BodyState& body : s.bodies) {
      b.putString(body.name);
      b.putVec(body.position);
      b.putQuat(body.orientation);
      b.putVec(body.linear_velocity);
      b.putVec(body.angular_velocity);
      b.putVec(body.voxelized_position);
      b.putQuat(body.voxelized_orientation);
    }
    putBlock(w, "BODY", b);
  }
  if (s.has_displacement) {
    Writer b;
    b.put(static_cast<std::uint64_t>(s.displacement_target.size()));
    for (const double v : s.displacement_target) b.put(v);
    b.put(static_cast<std::uint64_t>(s.displacement_pending.size()));
    for (const auto& e : s.displacement_pending) {
      b.put(e.index);
      b.put(e.rate);
      b.put(e.axis);
      b.put(e.direction);
    }
    b.put(s.displacement_stats.openings);
    b.put(s.displacement_stats.closings);
    b.put(s.displacement_stats.orphans);
    b.put(s.displacement_stats.drained_cells);
    putBlock(w, "DISP", b);
  }
  if (s.has_run_state) {
    Writer b;
    const RunState& r = s.run;
    b.put(r.dt);
    b.put(static_cast<std::uint8_t>(r.slow_armed));
    b.put(static_cast<std::uint8_t>(r.slow_active));
    b.put(r.quiet_steps);
    b.put(r.next_output_time);
    b.put(r.output_index);
    b.put(r.last_output_step);
    b.put(static_cast<std::uint8_t>(r.any_output));
    b.put(r.next_dust_id);
    b.put(static_cast<std::uint32_t>(r.charges_fired.size()));
    for (const auto f : r.charges_fired) b.put(f);
    putDiagnostics(b, r.diagnostics);
    putBlock(w, "RUNS", b);
  }
  w.bytes.insert(w.bytes.end(), {'E', 'N', 'D', '\0'});
  w.put(std::uint64_t{0});
  const auto crc = static_cast<std::uint32_t>(crc32(0L, w.bytes.data(), static_cast<uInt>(w.bytes.size())));
  w.put(crc);
  return std::move(w.bytes);
}

Snapshot decodeSnapshot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 8) != 0) throw IoError("not a blastvox snapshot");
  {
    std::uint32_t stored_crc;
    std::memcpy(&stored_crc, bytes.data() + bytes.size() - 4, 4);
    const auto crc = static_cast<std::uint32_t>(crc32(0L, bytes.data(), static_cast<uInt>(bytes.size() - 4)));
    if (crc != stored_crc) throw IoError("snapshot checksum mismatch");
  }
  Reader r(bytes.first(bytes.size() - 4));
  r.take(8);
  const auto version = r.get<std::uint32_t>();
  if (version != kSnapshotVersion) throw IoError("unsupported snapshot version " + std::to_string(version));
  const auto flags = r.get<std::uint32_t>();
  Snapshot s;
  s.dims.nx = r.get<std::int32_t>();
  s.dims.ny = r.get<std::int32_t>();
  s.dims.nz = r.get<std::int32_t>();
  if (s.dims.nx <= 0 || s.dims.ny <= 0 || s.dims.nz <= 0) throw IoError("snapshot has invalid dimensions");
  s.h = r.get<double>();
  s.origin = r.getVec();
  s.time = r.get<double>();
  s.step = r.get<std::uint64_t>();
  s.ambient_P = r.get<double>();
  s.ambient_T = r.get<double>();
  const auto nfields = r.get<std::uint32_t>();
  if (nfields != std::size(kFields)) throw IoError("snapshot field list does not match this reader");
  for (std::uint32_t f = 0; f < nfields; ++f) {
    const auto len = r.get<std::uint8_t>();
    const auto name = r.take(len);
    const auto type = r.get<std::uint8_t>();
    if (std::string(name.begin(), name.end()) != kFields[f].name || type != kFields[f].type) {
      throw IoError("snapshot field list does not match this reader");
    }
  }
  const auto stored_size = r.get<std::uint64_t>();
  const auto raw_size = r.get<std::uint64_t>();
  if (raw_size != s.dims.count() * (8 * 8 + 1)) throw IoError("snapshot payload size mismatch");
  const auto stored = r.take(stored_size);
  s.cells.resize(s.dims.count());
  if (flags & kFlagCompressed) {
    std::vector<std::uint8_t> raw(raw_size);
    uLongf len = static_cast<uLongf>(raw_size);
    if (uncompress(raw.data(), &len, stored.data(), static_cast<uLong>(stored.size())) != Z_OK || len != raw_size) {
      throw IoError("snapshot decompression failed");
    }
    decodePayload(raw, s.cells);
  } else {
    if (stored.size() != raw_size) throw IoError("snapshot payload size mismatch");
    decodePayload(stored, s.cells);
  }

  for (;;) {
    const auto tagb = r.take(4);
    const std::string tag(tagb.begin(), tagb.end());
    const auto len = r.get<std::uint64_t>();
    if (tag == std::string("END\0", 4)) break;
    Reader b(r.take(len));
    if (tag == "TRCR") {
      const auto n = b.get<std::uint64_t>();
      s.tracers.resize(n);
      for (TracerParticle& t : s.tracers) {
        t.id = b.get<std::uint64_t>();
        t.position = b.getVec();
        t.temperature = b.get<double>();
        t.color.r = b.get<double>();
        t.color.g = b.get<double>();
        t.color.b = b.get<double>();
        t.color.a = b.get<double>();
        t.frozen = b.get<std::uint8_t>() != 0;
      }
    } else if (tag == "DUST") {
      const auto n = b.get<std::uint64_t>();
      s.dust.resize(n);
      for (DustMetaParticle& d : s.dust) {
        d.id = b.get<std::uint64_t>();
        d.center = b.getVec();
        d.velocity = b.getVec();
        d.variance = b.get<double>();
        d.diameter = b.get<double>();
        d.weight = b.get<double>();
        d.frozen = b.get<std::uint8_t>() != 0;
      }
    } else if (tag == "BODY") {
      const auto n = b.get<std::uint32_t>();
      s.bodies.resize(n);
      for (BodyState& body : s.bodies) {
        body.name = b.getString();
        body.position = b.getVec();
        body.orientation = b.getQuat();
        body.linear_velocity = b.getVec();
        body.angular_velocity = b.getVec();
        body.voxelized_position = b.getVec();
        body.voxelized_orientation = b.getQuat();
      }
    } else if (tag == "DISP") {
      s.has_displacement = true;
      s.displacement_target.resize(b.get<std::uint64_t>());
      for (double& v : s.displacement_target) v = b.get<double>();
      s.displacement_pending.resize(b.get<std::uint64_t>());
      for (auto& e : s.displacement_pending) {
        e.index = b.get<std::uint32_t>();
        e.rate = b.get<double>();
        e.axis = b.get<std::int8_t>();
        e.direction = b.get<std::int8_t>();
      }
      s.displacement_stats.openings = b.get<std::uint64_t>();
      s.displacement_stats.closings = b.get<std::uint64_t>();
      s.displacement_stats.orphans = b.get<std::uint64_t>();
      s.displacement_stats.drained_cells = b.get<std::uint64_t>();
    } else if (tag == "RUNS") {
      s.has_run_state = true;
      RunState& run = s.run;
      run.dt = b.get<double>();
      run.slow_armed = b.get<std::uint8_t>() != 0;
      run.slow_active = b.get<std::uint8_t>() != 0;
      run.quiet_steps = b.get<std::int32_t>();
      run.next_output_time = b.get<double>();
      run.output_index = b.get<std::uint64_t>();
      run.last_output_step = b.get<std::uint64_t>();
      run.any_output = b.get<std::uint8_t>() != 0;
      run.next_dust_id = b.get<std::uint64_t>();
      run.charges_fired.resize(b.get<std::uint32_t>());
      for (auto& f : run.charges_fired) f = b.get<std::uint8_t>();
      run.diagnostics = getDiagnostics(b);
    }
    // Unknown blocks are skipped so newer writers stay readable.
  }
  if (!r.done()) throw IoError("snapshot has trailing bytes");
  return s;
}

void writeSnapshot(const std::filesystem::path& path, const Snapshot& snap, bool compress) {
  const std::vector<std::uint8_t> bytes = encodeSnapshot(snap, compress);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write snapshot " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move snapshot into place: " + path.string());
}

Snapshot readSnapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decodeSnapshot(bytes);
}

}  // namespace blastvox

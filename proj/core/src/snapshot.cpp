#include "kslab/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace kslab {

namespace {

constexpr char kMagic[4] = {'K', 'S', 'F', 'D'};
constexpr std::uint32_t kVersion = 1;

// The build targets little-endian hosts; plain byte copies of u32/f64 below
// produce the little-endian layout the format requires.
static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

void put_bytes(std::string& out, const void* p, std::size_t n) {
  out.append(static_cast<const char*>(p), n);
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw SnapshotError("snapshot: cannot open for writing: " + path);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw SnapshotError("snapshot: short write: " + path);
}

std::string header(std::uint8_t domain, std::uint8_t dim, const std::vector<std::uint32_t>& axes,
                   double geometry) {
  std::string out;
  put_bytes(out, kMagic, 4);
  put_bytes(out, &kVersion, 4);
  put_bytes(out, &domain, 1);
  put_bytes(out, &dim, 1);
  for (std::uint32_t a : axes) put_bytes(out, &a, 4);
  put_bytes(out, &geometry, 8);
  return out;
}

class Reader {
 public:
  explicit Reader(const std::string& path) : path_(path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SnapshotError("snapshot: cannot open: " + path);
    bytes_.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
  }

  void take(void* dst, std::size_t n, const char* what) {
    if (pos_ + n > bytes_.size())
      throw SnapshotError("snapshot: truncated file " + path_ + " reading " + what +
                          ": expected " + std::to_string(pos_ + n) + " bytes, have " +
                          std::to_string(bytes_.size()));
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }

  void expect_end() {
    if (pos_ != bytes_.size())
      throw SnapshotError("snapshot: trailing bytes in " + path_ + ": expected " +
                          std::to_string(pos_) + " bytes, have " +
                          std::to_string(bytes_.size()));
  }

 private:
  std::string path_;
  std::string bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_snapshot(const std::string& path, const TorusField& field) {
  const TorusGrid& g = field.grid();
  std::vector<std::uint32_t> axes(static_cast<std::size_t>(g.dim),
                                  static_cast<std::uint32_t>(g.points));
  std::string out = header(0, static_cast<std::uint8_t>(g.dim), axes, g.length);
  put_bytes(out, field.values().data(), sizeof(double) * field.values().size());
  write_file(path, out);
}

void save_snapshot(const std::string& path, const RadialField& field) {
  const RadialGrid& g = field.grid();
  std::vector<std::uint32_t> axes{static_cast<std::uint32_t>(g.nodes)};
  std::string out = header(1, static_cast<std::uint8_t>(g.dim), axes, g.tau_max);
  put_bytes(out, field.values().data(), sizeof(double) * field.values().size());
  write_file(path, out);
}

AnyField load_snapshot(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.take(magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw SnapshotError("snapshot: bad magic in " + path);
  std::uint32_t version = 0;
  r.take(&version, 4, "version");
  if (version != kVersion)
    throw SnapshotError("snapshot: unsupported version " + std::to_string(version) + " in " +
                        path);
  std::uint8_t domain = 0, dim = 0;
  r.take(&domain, 1, "domain tag");
  r.take(&dim, 1, "dimension");

  if (domain == 0) {
    std::vector<std::uint32_t> axes(dim);
    for (auto& a : axes) r.take(&a, 4, "axis count");
    for (std::size_t d = 1; d < axes.size(); ++d)
      if (axes[d] != axes[0]) throw SnapshotError("snapshot: anisotropic torus axes in " + path);
    double length = 0.0;
    r.take(&length, 8, "geometry");
    TorusGrid grid = make_torus_grid(dim, static_cast<int>(axes.at(0)), length);
    std::vector<double> values(static_cast<std::size_t>(grid.size()));
    r.take(values.data(), sizeof(double) * values.size(), "payload");
    r.expect_end();
    return TorusField(grid, std::move(values));
  }
  if (domain == 1) {
    std::uint32_t nodes = 0;
    r.take(&nodes, 4, "axis count");
    double tau_max = 0.0;
    r.take(&tau_max, 8, "geometry");
    RadialGrid grid = make_radial_grid(dim, static_cast<int>(nodes), tau_max);
    std::vector<double> values(static_cast<std::size_t>(nodes));
    r.take(values.data(), sizeof(double) * values.size(), "payload");
    r.expect_end();
    return RadialField(grid, std::move(values));
  }
  throw SnapshotError("snapshot: unknown domain tag " + std::to_string(domain) + " in " + path);
}

TorusField load_torus_snapshot(const std::string& path) {
  AnyField f = load_snapshot(path);
  if (!std::holds_alternative<TorusField>(f))
    throw SnapshotError("snapshot: domain tag mismatch: " + path +
                        " holds a hyperbolic-radial field, torus expected");
  return std::get<TorusField>(std::move(f));
}

RadialField load_radial_snapshot(const std::string& path) {
  AnyField f = load_snapshot(path);
  if (!std::holds_alternative<RadialField>(f))
    throw SnapshotError("snapshot: domain tag mismatch: " + path +
                        " holds a torus field, hyperbolic-radial expected");
  return std::get<RadialField>(std::move(f));
}

}  // namespace kslab

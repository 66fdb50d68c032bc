#include "smrom/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace smrom {

static_assert(std::endian::native == std::endian::little, "binary stores assume a little-endian host");

namespace {

class Writer {
 public:
  explicit Writer(const std::string& path) : path_(path), os_(path, std::ios::binary | std::ios::trunc) {
    if (!os_) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  }
  void magic(const char (&m)[9]) { os_.write(m, 8); }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void vec(const Vec& v) { raw(v.data(), sizeof(double) * static_cast<std::size_t>(v.size())); }
  /// Row-major: the rows of `m` one after another.
  void rows(const Mat& m) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    raw(rm.data(), sizeof(double) * static_cast<std::size_t>(rm.size()));
  }
  void finish() {
    os_.flush();
    if (!os_) throw Error(ErrorCode::io, "write failed for " + path_);
  }

 private:
  void raw(const void* p, std::size_t n) { os_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  std::string path_;
  std::ofstream os_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : path_(path), is_(path, std::ios::binary) {
    if (!is_) throw Error(ErrorCode::io, "cannot open " + path);
  }
  void expect(const char (&m)[9]) {
    char buf[8];
    raw(buf, 8);
    if (std::memcmp(buf, m, 8) != 0) throw Error(ErrorCode::io, path_ + ": not a " + std::string(m) + " file");
    const std::uint32_t v = u32();
    if (v != kFormatVersion) {
      throw Error(ErrorCode::io, path_ + ": format version " + std::to_string(v) + " is not supported (expected " +
                                     std::to_string(kFormatVersion) + ")");
    }
  }
  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, sizeof v);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    raw(&v, sizeof v);
    if (v > (std::uint64_t{1} << 40)) throw Error(ErrorCode::io, path_ + ": implausible size field");
    return v;
  }
  double f64() {
    double v;
    raw(&v, sizeof v);
    return v;
  }
  Vec vec(std::uint64_t n) {
    Vec v(static_cast<Eigen::Index>(n));
    raw(v.data(), sizeof(double) * n);
    return v;
  }
  Mat rows(std::uint64_t r, std::uint64_t c) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(static_cast<Eigen::Index>(r),
                                                                              static_cast<Eigen::Index>(c));
    raw(rm.data(), sizeof(double) * r * c);
    return rm;
  }
  void finish() {
    if (is_.peek() != std::char_traits<char>::eof()) throw Error(ErrorCode::io, path_ + ": trailing bytes");
  }

 private:
  void raw(void* p, std::size_t n) {
    is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!is_) throw Error(ErrorCode::io, path_ + ": truncated file");
  }
  std::string path_;
  std::ifstream is_;
};

}  // namespace

void write_snapshots(const std::string& path, const SnapshotSet& s) {
  if (s.velocity.cols() != s.size() || s.pressure.cols() != s.size()) {
    throw Error(ErrorCode::dimension_mismatch, "snapshot matrices and times disagree");
  }
  Writer w(path);
  w.magic("SMROMSNP");
  w.u32(kFormatVersion);
  w.u64(static_cast<std::uint64_t>(s.size()));
  w.u64(static_cast<std::uint64_t>(s.velocity.rows()));
  w.u64(static_cast<std::uint64_t>(s.pressure.rows()));
  w.f64(s.dt);
  for (double t : s.times) w.f64(t);
  w.rows(s.velocity.transpose());
  w.rows(s.pressure.transpose());
  w.finish();
}

SnapshotSet read_snapshots(const std::string& path) {
  Reader r(path);
  r.expect("SMROMSNP");
  const auto n = r.u64();
  const auto nv = r.u64();
  const auto np = r.u64();
  SnapshotSet s;
  s.dt = r.f64();
  s.times.resize(n);
  for (auto& t : s.times) t = r.f64();
  s.velocity = r.rows(n, nv).transpose();
  s.pressure = r.rows(n, np).transpose();
  r.finish();
  return s;
}

void write_metadata(const std::string& path, const Metadata& meta) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  for (const auto& [k, v] : meta) os << k << " = " << v << '\n';
  if (!os) throw Error(ErrorCode::io, "write failed for " + path);
}

Metadata read_metadata(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::io, "cannot open " + path);
  Metadata m;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    m[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return m;
}

void write_snapshot_bundle(const std::string& path, const SnapshotSet& s, const Metadata& meta) {
  write_snapshots(path, s);
  write_metadata(path + ".meta", meta);
  SnapshotSet init;
  init.dt = s.dt;
  init.times = {0.0};
  init.velocity = s.initial_velocity;
  init.pressure = s.initial_pressure.size() ? Mat(s.initial_pressure) : Mat::Zero(s.pressure.rows(), 1);
  write_snapshots(path + ".init", init);
}

SnapshotSet read_snapshot_bundle(const std::string& path, Metadata& meta) {
  SnapshotSet s = read_snapshots(path);
  meta = read_metadata(path + ".meta");
  const SnapshotSet init = read_snapshots(path + ".init");
  if (init.size() != 1 || init.velocity.rows() != s.velocity.rows()) {
    throw Error(ErrorCode::io, path + ".init: initial state does not match the snapshots");
  }
  s.initial_velocity = init.velocity.col(0);
  s.initial_pressure = init.pressure.col(0);
  return s;
}

void write_basis(const std::string& path, const PODBasis& b) {
  Writer w(path);
  w.magic("SMROMPOD");
  w.u32(kFormatVersion);
  w.u32(b.field == FieldKind::velocity ? 0u : 1u);
  w.u32(static_cast<std::uint32_t>(b.centering));
  w.u64(static_cast<std::uint64_t>(b.modes.rows()));
  w.u64(static_cast<std::uint64_t>(b.r()));
  w.u64(static_cast<std::uint64_t>(b.eigenvalues.size()));
  w.u64(static_cast<std::uint64_t>(b.rank));
  w.f64(b.dt);
  w.vec(b.eigenvalues);
  w.rows(b.modes.transpose());
  w.vec(b.offset.size() == b.modes.rows() ? b.offset : Vec::Zero(b.modes.rows()));
  w.finish();
}

PODBasis read_basis(const std::string& path, std::shared_ptr<const SparseMatrix> weight) {
  Reader r(path);
  r.expect("SMROMPOD");
  PODBasis b;
  const auto field = r.u32();
  const auto centering = r.u32();
  if (field > 1 || centering > 2) throw Error(ErrorCode::io, path + ": bad field or centering tag");
  b.field = field == 0 ? FieldKind::velocity : FieldKind::pressure;
  b.centering = static_cast<Centering>(centering);
  const auto n = r.u64();
  const auto m = r.u64();
  const auto ne = r.u64();
  b.rank = static_cast<int>(r.u64());
  b.dt = r.f64();
  b.eigenvalues = r.vec(ne);
  b.modes = r.rows(m, n).transpose();
  b.offset = r.vec(n);
  r.finish();
  if (weight && weight->rows() != static_cast<Eigen::Index>(n)) {
    throw Error(ErrorCode::dimension_mismatch, path + ": weight does not match the basis length");
  }
  b.weight = std::move(weight);
  return b;
}

void write_trajectory(const std::string& path, const ROMTrajectory& t) {
  Writer w(path);
  w.magic("SMROMTRJ");
  w.u32(kFormatVersion);
  w.u64(static_cast<std::uint64_t>(t.a.cols()));
  w.u64(static_cast<std::uint64_t>(t.a.rows()));
  w.f64(t.dt);
  w.rows(t.a);
  w.u64(static_cast<std::uint64_t>(t.b.cols()));
  w.rows(t.b);
  w.finish();
}

ROMTrajectory read_trajectory(const std::string& path) {
  Reader r(path);
  r.expect("SMROMTRJ");
  ROMTrajectory t;
  const auto rv = r.u64();
  const auto n = r.u64();
  t.dt = r.f64();
  t.a = r.rows(n, rv);
  const auto rp = r.u64();
  t.b = r.rows(n, rp);
  r.finish();
  for (std::uint64_t i = 1; i <= n; ++i) t.times.push_back(static_cast<double>(i) * t.dt);
  return t;
}

}  // namespace smrom

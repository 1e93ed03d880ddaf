#include "elbm/snapshot.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "elbm/errors.hpp"

namespace elbm {
namespace {

template <typename T>
void put_le(std::vector<unsigned char>& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                               std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                  std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                                                     std::uint8_t>>>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
}

class Reader {
 public:
  explicit Reader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

  template <typename T>
  T get(const char* what) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                    std::conditional_t<sizeof(T) == 2,
                                                                       std::uint16_t, std::uint8_t>>>;
    need(sizeof(T), what);
    U bits = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<U>(U(bytes_[pos_ + b]) << (8 * b));
    pos_ += sizeof(T);
    return std::bit_cast<T>(bits);
  }

  std::string text(std::size_t n, const char* what) {
    need(n, what);
    std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (remaining() < n)
      throw IoError(std::string("snapshot truncated while reading ") + what + ": need " +
                    std::to_string(n) + " bytes, " + std::to_string(remaining()) + " left");
  }

  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const std::vector<double>& Snapshot::field(const std::string& name) const {
  for (const auto& [n, data] : fields)
    if (n == name) return data;
  throw std::out_of_range("snapshot has no field '" + name + "'");
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  if (snap.nx <= 0 || snap.ny <= 0) throw std::invalid_argument("snapshot dimensions must be positive");
  if (snap.fields.size() > 255) throw std::invalid_argument("at most 255 fields per snapshot");
  const std::size_t n = static_cast<std::size_t>(snap.nx) * snap.ny;

  std::vector<unsigned char> out{'E', 'L', 'B', 'M'};
  put_le(out, kSnapshotVersion);
  put_le(out, static_cast<std::uint32_t>(snap.nx));
  put_le(out, static_cast<std::uint32_t>(snap.ny));
  put_le(out, static_cast<std::uint8_t>(snap.fields.size()));
  for (const auto& [name, data] : snap.fields) {
    if (name.empty() || name.size() > 255)
      throw std::invalid_argument("field names must be 1-255 bytes");
    if (data.size() != n) throw std::invalid_argument("field '" + name + "' has wrong size");
    put_le(out, static_cast<std::uint8_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
  }
  for (const auto& [name, data] : snap.fields)
    for (double v : data) {
      if (!std::isfinite(v)) throw std::invalid_argument("field '" + name + "' is not finite");
      put_le(out, v);
    }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError("write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  Reader r(std::move(bytes));
  if (r.text(4, "magic") != "ELBM") throw IoError(path.string() + " is not a snapshot (bad magic)");
  const auto version = r.get<std::uint16_t>("version");
  if (version != kSnapshotVersion)
    throw IoError("unsupported snapshot version " + std::to_string(version) + " (expected " +
                  std::to_string(kSnapshotVersion) + ")");
  Snapshot snap;
  snap.nx = static_cast<int>(r.get<std::uint32_t>("nx"));
  snap.ny = static_cast<int>(r.get<std::uint32_t>("ny"));
  if (snap.nx <= 0 || snap.ny <= 0) throw IoError("snapshot has zero dimensions");
  const auto count = r.get<std::uint8_t>("field count");
  for (int k = 0; k < count; ++k) {
    const auto len = r.get<std::uint8_t>("field name length");
    snap.fields.emplace_back(r.text(len, "field name"), std::vector<double>{});
  }
  const std::size_t n = static_cast<std::size_t>(snap.nx) * snap.ny;
  const std::size_t expected = n * count * sizeof(double);
  if (r.remaining() < expected)
    throw IoError("snapshot truncated: expected " + std::to_string(expected) +
                  " payload bytes, found " + std::to_string(r.remaining()));
  if (r.remaining() > expected)
    throw IoError("snapshot length mismatch: " + std::to_string(r.remaining() - expected) +
                  " trailing bytes after the payload");
  for (auto& [name, data] : snap.fields) {
    data.resize(n);
    for (auto& v : data) v = r.get<double>("field data");
  }
  return snap;
}

}  // namespace elbm

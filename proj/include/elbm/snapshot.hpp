#ifndef ELBM_SNAPSHOT_HPP_
#define ELBM_SNAPSHOT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace elbm {

/// Binary field dump, little-endian:
///   "ELBM" | u16 version | u32 nx | u32 ny | u8 field count |
///   per field: u8 name length, name bytes |
///   per field: nx*ny f64, row-major (index = y * nx + x).
inline constexpr std::uint16_t kSnapshotVersion = 1;

struct Snapshot {
  int nx = 0;
  int ny = 0;
  std::vector<std::pair<std::string, std::vector<double>>> fields;

  const std::vector<double>& field(const std::string& name) const;
};

/// Throws IoError on failure or std::invalid_argument for malformed input
/// (non-finite values, wrong sizes, names longer than 255 bytes).
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);

/// Throws IoError on I/O failure, bad magic, unsupported version, or a
/// truncated/oversized payload.
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace elbm

#endif  // ELBM_SNAPSHOT_HPP_

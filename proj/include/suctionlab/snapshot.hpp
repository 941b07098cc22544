#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "suctionlab/field.hpp"
#include "suctionlab/params.hpp"

namespace suctionlab {

/// Field snapshot file, version 1 (all integers and doubles little-endian):
///
///   bytes 0..7    magic "SLSNAP01"
///   uint32        format version (1)
///   uint64        length L of the JSON header
///   L bytes       JSON header: {"format", "version", "time", "params", "grid": {"n_x", "n_y",
///                 "l_x", "h", "stretch_ratio", "y_faces"}}
///   doubles       u, (n_y + 2) * n_x values including the two ghost rows, row-major from row -1
///   doubles       v, (n_y + 1) * n_x values
///   doubles       p, n_y * n_x values
struct Snapshot {
  SimulationParams params;
  StaggeredField field;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& os, const StaggeredField& field, const SimulationParams& params);
void write_snapshot(const std::string& path, const StaggeredField& field, const SimulationParams& params);
/// Throws FormatError on a bad magic, an unknown version, a malformed header or a short body.
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot(const std::string& path);

/// CSV of (x, y, u, v, p) at cell centers, velocities averaged from the faces. The first line is
/// a comment holding the same JSON header as the binary format.
void write_field_csv(std::ostream& os, const StaggeredField& field, const SimulationParams& params);

}  // namespace suctionlab

#pragma once

#include "smrom/fom.hpp"
#include "smrom/pod.hpp"
#include "smrom/rom.hpp"

#include <map>
#include <string>

namespace smrom {

inline constexpr std::uint32_t kFormatVersion = 1;

/// Plain key = value metadata written next to binary files.
using Metadata = std::map<std::string, std::string>;

/// Snapshot store. The space pointer of the returned set is left empty; the
/// caller rebuilds it from the metadata.
void write_snapshots(const std::string& path, const SnapshotSet& s);
SnapshotSet read_snapshots(const std::string& path);

/// Snapshot file plus "<path>.meta" and the initial state in "<path>.init".
void write_snapshot_bundle(const std::string& path, const SnapshotSet& s, const Metadata& meta);
SnapshotSet read_snapshot_bundle(const std::string& path, Metadata& meta);

void write_metadata(const std::string& path, const Metadata& meta);
Metadata read_metadata(const std::string& path);

/// Basis store; the weight matrix is not stored and must be reattached.
void write_basis(const std::string& path, const PODBasis& b);
PODBasis read_basis(const std::string& path, std::shared_ptr<const SparseMatrix> weight);

void write_trajectory(const std::string& path, const ROMTrajectory& t);
ROMTrajectory read_trajectory(const std::string& path);

}  // namespace smrom

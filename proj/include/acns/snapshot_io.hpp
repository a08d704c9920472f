#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "acns/field.hpp"

namespace acns {

/// Binary snapshot format: magic "ACNS", version, kind, dimension,
/// cell counts, spacing, epsilon, time, then the little-endian f64 payload
/// (face arrays axis by axis, then cells, for full states). The payload
/// length must match the header exactly; anything else is CorruptSnapshot.
enum class SnapshotKind : std::uint32_t {
    Scalar = 0,
    Staggered = 1,
    State = 2,  // velocity faces then pressure cells
};

struct SnapshotHeader {
    SnapshotKind kind = SnapshotKind::State;
    int dim = 0;
    std::array<int, 3> cells{1, 1, 1};
    std::array<double, 3> spacing{0, 0, 0};
    double epsilon = 0;
    double time = 0;
};

void write_state_snapshot(const std::filesystem::path& path, const StaggeredField& u,
                          const ScalarField& p, double epsilon, double time);
void write_scalar_snapshot(const std::filesystem::path& path, const ScalarField& f,
                           double epsilon, double time);

struct StateSnapshot {
    SnapshotHeader header;
    StaggeredField u;
    ScalarField p;  // empty for kind Staggered
};

/// Read a snapshot against a known geometry (shape must match bit-exactly).
StateSnapshot read_state_snapshot(const std::filesystem::path& path, const GeometryPtr& geom);

}  // namespace acns

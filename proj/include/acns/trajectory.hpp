#pragma once

#include <vector>

#include "acns/field.hpp"

namespace acns {

struct Snapshot {
    double time = 0;
    StaggeredField u;
    ScalarField p;
};

/// Snapshot sequence at uniform cadence, including t = 0 and t = T.
struct Trajectory {
    GeometryPtr geom;
    double epsilon = 0;   // 0 marks the incompressible reference
    double dt = 0;        // stepper dt
    double snap_dt = 0;   // cadence * dt
    std::vector<Snapshot> snaps;

    double horizon() const { return snaps.empty() ? 0.0 : snaps.back().time; }
};

}  // namespace acns

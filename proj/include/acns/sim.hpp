#pragma once

#include <string>

#include "acns/field.hpp"
#include "acns/geometry.hpp"

namespace acns {

struct InitialDataSpec {
    enum class Kind { Zero, TaylorGreenLike, RandomSolenoidal, File };
    Kind kind = Kind::RandomSolenoidal;
    double amplitude = 1.0;     // target L2 norm of the velocity
    std::uint64_t seed = 42;
    int max_mode = 8;           // random synthesis band limit
    double spectral_decay = 1.5;
    std::string path;           // Kind::File
};

struct SimConfig {
    double epsilon = 1e-2;
    double mu = 1.0;       // kinematic viscosity
    double dt = 0;         // 0 = choose from the stability bound
    double t_end = 0.5;
    double cfl_safety = 0.4;
    int snapshot_cadence = 1;
    double tol_elliptic = 1e-8;
    int basis_rank = 256;
    GeometrySpec geometry;
    InitialDataSpec initial;
};

/// Evolving pair (u, p). The previous-step pressure feeds the two-level
/// boundary update.
struct SimState {
    double time = 0;
    long step_count = 0;
    StaggeredField u;
    ScalarField p;
    ScalarField p_prev;
};

}  // namespace acns

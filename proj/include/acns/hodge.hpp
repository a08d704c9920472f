#pragma once

#include "acns/elliptic.hpp"
#include "acns/field.hpp"

namespace acns {

/// Discrete Leray-Hodge decomposition u = Pu + Qu with Q = grad o inv(lap_N) o div.
/// The solenoidal part has face divergence at solver tolerance and exactly
/// zero normal trace on obstacle faces (those faces are pinned).
struct LerayPair {
    StaggeredField solenoidal;     // Pu
    StaggeredField gradient_part;  // Qu = grad(potential)
    ScalarField potential;
};

LerayPair leray_decompose(const StaggeredField& u, double elliptic_tol = 1e-8);

}  // namespace acns

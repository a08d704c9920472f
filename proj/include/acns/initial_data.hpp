#pragma once

#include "acns/sim.hpp"

namespace acns {

/// Build the initial velocity for a spec. Every built-in generator returns
/// a field that respects the pinned-face boundary condition and has been
/// projected to the solenoidal subspace; the field does not depend on
/// epsilon. Throws BadInitialData on file shape mismatch or nonfinite data.
StaggeredField make_initial_velocity(const InitialDataSpec& spec, const GeometryPtr& geom,
                                     double elliptic_tol);

/// Initial pressure: zero unless loaded from file.
ScalarField make_initial_pressure(const InitialDataSpec& spec, const GeometryPtr& geom);

}  // namespace acns

#pragma once

#include "acns/ac_solver.hpp"

namespace acns {

/// Incompressible reference solver: explicit advection-diffusion predictor
/// followed by a Leray projection. Shares every spatial operator with the
/// compressible stepper so that epsilon comparisons isolate the
/// compressibility error.
SimState ns_step(const SimState& state, const SimConfig& cfg, double initial_energy);

/// Integrate the reference solution; epsilon in the returned trajectory is 0.
RunResult ns_run(const SimConfig& cfg, const GeometryPtr& geom);

/// The limit pressure p = inv(lap_N) div((u.grad)u) with zero mean.
ScalarField limit_pressure(const StaggeredField& u, double elliptic_tol = 1e-8);

}  // namespace acns

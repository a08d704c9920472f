#pragma once

#include "acns/sim.hpp"
#include "acns/trajectory.hpp"

namespace acns {

/// Per-step energy bookkeeping: E = |u|^2/2 + eps |p|^2/2, the cumulative
/// viscous dissipation (trapezoid), and the identity residual
/// E(t) + dissipation - E(0).
struct EnergyLedger {
    struct Row {
        long step;
        double time;
        double kinetic;
        double pressure_part;
        double energy;
        double grad_sq;          // |grad u|^2 at this instant
        double dissipation_cum;  // mu * integral of grad_sq
        double residual;
        double p_l2;
        double u_l2;
        double div_l2;
    };
    std::vector<Row> rows;

    double initial_energy() const { return rows.empty() ? 0.0 : rows.front().energy; }
    double final_residual() const { return rows.empty() ? 0.0 : rows.back().residual; }
};

struct RunResult {
    Trajectory trajectory;
    EnergyLedger ledger;
    std::string error;     // set when a captured blowup ended the run early
    long error_step = -1;

    bool ok() const { return error.empty(); }
};

/// Stability bound dt <= safety * min(dx^2/(2 d mu), dx sqrt(eps), dx/|u|_inf).
/// The sqrt(eps) term tracks the acoustic speed of the pressure waves.
double stable_dt(const SimConfig& cfg, const DomainGeometry& geom, double umax);

/// Build the initial state; validates the time step against the bound.
SimState initialize(const SimConfig& cfg, const GeometryPtr& geom);

/// One explicit step, all updates evaluated from the incoming state:
/// forward-Euler momentum, forward-Euler pressure on interior fluid cells,
/// two-level leapfrog pressure at wall-adjacent cells. Throws Blowup on
/// nonfinite fields or a 1000x kinetic energy increase.
SimState step(const SimState& state, const SimConfig& cfg, double initial_energy);

/// The boundary pressure update alone: a copy of the current pressure with
/// the two-level formula applied at every wall-adjacent cell (obstacle and
/// far-field walls alike). On the staggered grid the formula's one-sided
/// normal difference is the face divergence itself, so the update reads
/// p_prev - (2 dt/eps) div(u), per boundary orientation.
ScalarField chorin_boundary_pressure(const SimState& state, const SimConfig& cfg);

/// Integrate to t_end, returning snapshots at the configured cadence plus
/// the per-step ledger. Step errors propagate with their step index unless
/// capture_blowup is set, in which case the partial result comes back with
/// the last good state flushed as a final snapshot and the error recorded.
RunResult run(const SimConfig& cfg, const GeometryPtr& geom, bool capture_blowup = false);

}  // namespace acns

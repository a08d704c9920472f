#include "acns/ns_reference.hpp"

#include <cmath>

#include "acns/errors.hpp"
#include "acns/hodge.hpp"
#include "acns/initial_data.hpp"
#include "acns/norms.hpp"
#include "acns/operators.hpp"

namespace acns {

SimState ns_step(const SimState& state, const SimConfig& cfg, double initial_energy) {
    if (!(cfg.dt > 0)) throw Error("ns_step needs an explicit dt");
    SimState next;
    next.time = state.time + cfg.dt;
    next.step_count = state.step_count + 1;

    StaggeredField ustar = state.u;
    const StaggeredField lap = velocity_laplacian(state.u);
    const StaggeredField conv = convective_term(state.u);
    axpy(cfg.dt * cfg.mu, lap, ustar);
    axpy(-cfg.dt, conv, ustar);
    enforce_pinned_faces(ustar);

    LerayPair pair = leray_decompose(ustar, cfg.tol_elliptic);
    next.u = std::move(pair.solenoidal);
    next.p = std::move(pair.potential);
    scale(next.p, 1.0 / cfg.dt);  // projection multiplier
    next.p_prev = next.p;

    if (!all_finite(next.u)) throw Blowup("nonfinite field", next.step_count);
    if (initial_energy > 0 && 0.5 * inner(next.u, next.u) > 1e3 * initial_energy)
        throw Blowup("kinetic energy exceeded 1000x the initial energy", next.step_count);
    return next;
}

RunResult ns_run(const SimConfig& cfg, const GeometryPtr& geom) {
    SimConfig c = cfg;
    SimState s;
    s.u = make_initial_velocity(c.initial, geom, c.tol_elliptic);
    s.p = ScalarField(geom);
    s.p_prev = s.p;
    if (c.dt <= 0) {
        const double limit = stable_dt(c, *geom, lp_norm(s.u, INFINITY));
        const long n = std::max<long>(1, long(std::ceil(c.t_end / limit - 1e-12)));
        c.dt = c.t_end > 0 ? c.t_end / double(n) : limit;
    }
    const long nsteps = c.t_end > 0 ? long(std::llround(c.t_end / c.dt)) : 0;
    const int cadence = std::max(1, c.snapshot_cadence);

    RunResult out;
    out.trajectory.geom = geom;
    out.trajectory.epsilon = 0.0;
    out.trajectory.dt = c.dt;
    out.trajectory.snap_dt = c.dt * cadence;

    double grad_sq = dirichlet_energy(s.u);
    double dissipation = 0;
    double e0 = 0.5 * inner(s.u, s.u);
    EnergyLedger::Row row0{};
    row0.time = 0;
    row0.kinetic = e0;
    row0.energy = e0;
    row0.grad_sq = grad_sq;
    row0.u_l2 = std::sqrt(2.0 * e0);
    row0.div_l2 = lp_norm(divergence(s.u), 2.0);
    out.ledger.rows.push_back(row0);
    out.trajectory.snaps.push_back({s.time, s.u, s.p});

    for (long n = 0; n < nsteps; ++n) {
        SimState nx = ns_step(s, c, e0);
        nx.time = double(n + 1) * c.dt;
        const double grad_sq_next = dirichlet_energy(nx.u);
        dissipation += 0.5 * c.dt * c.mu * (grad_sq + grad_sq_next);
        grad_sq = grad_sq_next;
        s = std::move(nx);
        EnergyLedger::Row row{};
        row.step = s.step_count;
        row.time = s.time;
        row.kinetic = 0.5 * inner(s.u, s.u);
        row.energy = row.kinetic;
        row.grad_sq = grad_sq;
        row.dissipation_cum = dissipation;
        row.residual = row.energy + dissipation - e0;
        row.u_l2 = std::sqrt(2.0 * row.kinetic);
        row.div_l2 = lp_norm(divergence(s.u), 2.0);
        out.ledger.rows.push_back(row);
        if ((n + 1) % cadence == 0 || n + 1 == nsteps)
            out.trajectory.snaps.push_back({s.time, s.u, s.p});
    }
    return out;
}

ScalarField limit_pressure(const StaggeredField& u, double elliptic_tol) {
    PoissonOptions opt;
    opt.tol = elliptic_tol;
    opt.remove_mean_rhs = true;
    return solve_poisson_neumann(divergence(convective_term(u)), opt);
}

}  // namespace acns

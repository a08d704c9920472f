#include "acns/ac_solver.hpp"

#include <algorithm>
#include <cmath>

#include "acns/errors.hpp"
#include "acns/initial_data.hpp"
#include "acns/norms.hpp"
#include "acns/operators.hpp"

namespace acns {

namespace {

bool wall_adjacent(const DomainGeometry& g, std::size_t c) {
    return g.cell_class[c] == CellClass::ObstacleBoundary ||
           g.cell_class[c] == CellClass::FarfieldBoundary;
}

EnergyLedger::Row ledger_row(const SimState& s, const SimConfig& cfg, double grad_sq,
                             double dissipation_cum) {
    EnergyLedger::Row r{};
    r.step = s.step_count;
    r.time = s.time;
    const double u2 = inner(s.u, s.u);
    const double p2 = inner(s.p, s.p);
    r.kinetic = 0.5 * u2;
    r.pressure_part = 0.5 * cfg.epsilon * p2;
    r.energy = r.kinetic + r.pressure_part;
    r.grad_sq = grad_sq;
    r.dissipation_cum = dissipation_cum;
    r.p_l2 = std::sqrt(p2);
    r.u_l2 = std::sqrt(u2);
    r.div_l2 = lp_norm(divergence(s.u), 2.0);
    return r;
}

}  // namespace

double stable_dt(const SimConfig& cfg, const DomainGeometry& geom, double umax) {
    double hmin = geom.spacing[0];
    for (int a = 1; a < geom.dim; ++a) hmin = std::min(hmin, geom.spacing[a]);
    double lim = hmin * hmin / (2.0 * geom.dim * cfg.mu);
    lim = std::min(lim, hmin * std::sqrt(cfg.epsilon));
    if (umax > 0) lim = std::min(lim, hmin / umax);
    return cfg.cfl_safety * lim;
}

SimState initialize(const SimConfig& cfg, const GeometryPtr& geom) {
    if (!(cfg.epsilon > 0)) throw Error("epsilon must be positive");
    if (!(cfg.mu > 0)) throw Error("viscosity must be positive");
    if (!(cfg.t_end >= 0)) throw Error("t_end must be nonnegative");
    SimState s;
    s.u = make_initial_velocity(cfg.initial, geom, cfg.tol_elliptic);
    s.p = make_initial_pressure(cfg.initial, geom);
    s.p_prev = s.p;
    if (cfg.dt > 0) {
        const double limit = stable_dt(cfg, *geom, lp_norm(s.u, INFINITY));
        if (cfg.dt > limit * (1.0 + 1e-12))
            throw CFLViolation("dt exceeds the stability bound");
    }
    return s;
}

ScalarField chorin_boundary_pressure(const SimState& state, const SimConfig& cfg) {
    const auto& g = *state.u.geom;
    // On the MAC staggering the wall face carries u = 0, so the one-sided
    // normal difference of the two-level formula is the face divergence
    // itself; tangential differences are centered across the cell.
    const ScalarField div = divergence(state.u);
    ScalarField out = state.p;
    for (std::size_t cell = 0; cell < out.v.size(); ++cell) {
        if (!wall_adjacent(g, cell)) continue;
        out.v[cell] = state.p_prev.v[cell] - (2.0 * cfg.dt / cfg.epsilon) * div.v[cell];
    }
    return out;
}

SimState step(const SimState& state, const SimConfig& cfg, double initial_energy) {
    const auto& g = *state.u.geom;
    if (!(cfg.dt > 0)) throw Error("step needs an explicit dt");

    SimState next;
    next.time = state.time + cfg.dt;
    next.step_count = state.step_count + 1;

    // momentum from the incoming state
    const StaggeredField lap = velocity_laplacian(state.u);
    const StaggeredField conv = convective_term(state.u);
    const StaggeredField gp = gradient(state.p);
    next.u = state.u;
    axpy(cfg.dt * cfg.mu, lap, next.u);
    axpy(-cfg.dt, conv, next.u);
    axpy(-cfg.dt, gp, next.u);
    enforce_pinned_faces(next.u);

    // Pressure: forward Euler on interior fluid cells, two-level leapfrog at
    // every wall-adjacent cell (obstacle and far-field walls alike, the
    // formula generalized per boundary orientation).
    const ScalarField div = divergence(state.u);
    next.p = state.p;
    for (std::size_t c = 0; c < next.p.v.size(); ++c) {
        if (!g.wet(c)) continue;
        if (wall_adjacent(g, c))
            next.p.v[c] = state.p_prev.v[c] - (2.0 * cfg.dt / cfg.epsilon) * div.v[c];
        else
            next.p.v[c] = state.p.v[c] - (cfg.dt / cfg.epsilon) * div.v[c];
    }
    next.p_prev = state.p;

    if (!all_finite(next.u) || !all_finite(next.p))
        throw Blowup("nonfinite field", next.step_count);
    if (initial_energy > 0) {
        const double kin = 0.5 * inner(next.u, next.u);
        if (kin > 1e3 * initial_energy)
            throw Blowup("kinetic energy exceeded 1000x the initial energy",
                         next.step_count);
    }
    return next;
}

RunResult run(const SimConfig& cfg, const GeometryPtr& geom, bool capture_blowup) {
    SimConfig c = cfg;
    SimState s = initialize(c, geom);
    if (c.dt <= 0) {
        const double limit = stable_dt(c, *geom, lp_norm(s.u, INFINITY));
        const long n = std::max<long>(1, long(std::ceil(c.t_end / limit - 1e-12)));
        c.dt = c.t_end > 0 ? c.t_end / double(n) : limit;
    }
    const long nsteps = c.t_end > 0 ? long(std::llround(c.t_end / c.dt)) : 0;
    if (c.t_end > 0 && std::abs(nsteps * c.dt - c.t_end) > 1e-9 * c.t_end)
        throw CFLViolation("t_end is not an integral number of steps");
    const int cadence = std::max(1, c.snapshot_cadence);

    RunResult out;
    out.trajectory.geom = geom;
    out.trajectory.epsilon = c.epsilon;
    out.trajectory.dt = c.dt;
    out.trajectory.snap_dt = c.dt * cadence;

    double grad_sq = c.mu > 0 ? dirichlet_energy(s.u) : 0.0;
    double dissipation = 0;
    out.ledger.rows.push_back(ledger_row(s, c, grad_sq, dissipation));
    const double e0 = out.ledger.rows.front().energy;
    out.trajectory.snaps.push_back({s.time, s.u, s.p});

    for (long n = 0; n < nsteps; ++n) {
        SimState nx;
        try {
            nx = step(s, c, e0);
        } catch (const Blowup& b) {
            if (!capture_blowup) throw;
            out.error = b.what();
            out.error_step = b.step;
            if (out.trajectory.snaps.back().time != s.time)
                out.trajectory.snaps.push_back({s.time, s.u, s.p});  // last good state
            return out;
        }
        nx.time = double(n + 1) * c.dt;  // products, not accumulation
        const double grad_sq_next = dirichlet_energy(nx.u);
        dissipation += 0.5 * c.dt * c.mu * (grad_sq + grad_sq_next);
        grad_sq = grad_sq_next;
        s = std::move(nx);
        auto row = ledger_row(s, c, grad_sq, dissipation);
        row.residual = row.energy + dissipation - e0;
        out.ledger.rows.push_back(row);
        if ((n + 1) % cadence == 0 || n + 1 == nsteps)
            out.trajectory.snaps.push_back({s.time, s.u, s.p});
    }
    return out;
}

}  // namespace acns

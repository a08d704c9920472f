#include "acns/diagnostics.hpp"

#include <cmath>

#include "acns/errors.hpp"
#include "acns/hodge.hpp"
#include "acns/norms.hpp"
#include "acns/operators.hpp"

namespace acns {

EnergyLedger energy_ledger(const Trajectory& traj, double epsilon, double mu) {
    EnergyLedger ledger;
    double dissipation = 0;
    double grad_prev = 0, e0 = 0;
    for (std::size_t n = 0; n < traj.snaps.size(); ++n) {
        const auto& s = traj.snaps[n];
        EnergyLedger::Row r{};
        r.step = long(n);
        r.time = s.time;
        const double u2 = inner(s.u, s.u);
        const double p2 = inner(s.p, s.p);
        r.kinetic = 0.5 * u2;
        r.pressure_part = 0.5 * epsilon * p2;
        r.energy = r.kinetic + r.pressure_part;
        r.grad_sq = dirichlet_energy(s.u);
        r.u_l2 = std::sqrt(u2);
        r.p_l2 = std::sqrt(p2);
        r.div_l2 = lp_norm(divergence(s.u), 2.0);
        if (n == 0) {
            e0 = r.energy;
        } else {
            dissipation += 0.5 * traj.snap_dt * mu * (grad_prev + r.grad_sq);
        }
        grad_prev = r.grad_sq;
        r.dissipation_cum = dissipation;
        r.residual = r.energy + dissipation - e0;
        ledger.rows.push_back(r);
    }
    return ledger;
}

BoundsReport apriori_bounds(const Trajectory& traj, double epsilon,
                            const SpectralBasis& basis) {
    BoundsReport rep;
    rep.epsilon = epsilon;
    const std::size_t n = traj.snaps.size();
    std::vector<double> p_l2(n), divu_hm1(n), grad_l2(n), u_l2(n), u_l6(n), conv_l1(n),
        conv_l32(n), corr_l1(n), corr_l32(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = traj.snaps[i];
        p_l2[i] = lp_norm(s.p, 2.0);
        grad_l2[i] = std::sqrt(dirichlet_energy(s.u));
        u_l2[i] = lp_norm(s.u, 2.0);
        u_l6[i] = lp_norm(s.u, 6.0);
        divu_hm1[i] = sobolev_norm(divergence(s.u), -1.0, basis).value;
        const StaggeredField adv = advective_part(s.u);
        const StaggeredField corr = divergence_correction(s.u);
        conv_l1[i] = lp_norm(adv, 1.0);
        conv_l32[i] = lp_norm(adv, 1.5);
        corr_l1[i] = lp_norm(corr, 1.0);
        corr_l32[i] = lp_norm(corr, 1.5);
    }
    const double dt = traj.snap_dt;
    rep.sqrt_eps_p_linf_l2 =
        std::sqrt(epsilon) * space_time_norm(p_l2, dt, INFINITY);
    rep.div_u_l2_hm1 = space_time_norm(divu_hm1, dt, 2.0);
    rep.grad_u_l2_l2 = space_time_norm(grad_l2, dt, 2.0);
    rep.u_linf_l2 = space_time_norm(u_l2, dt, INFINITY);
    rep.u_l2_l6 = space_time_norm(u_l6, dt, 2.0);
    rep.conv_l2_l1 = space_time_norm(conv_l1, dt, 2.0);
    rep.conv_l1_l32 = space_time_norm(conv_l32, dt, 1.0);
    rep.divu_u_l2_l1 = space_time_norm(corr_l1, dt, 2.0);
    rep.divu_u_l1_l32 = space_time_norm(corr_l32, dt, 1.0);
    return rep;
}

DecomposedTrajectory decompose_trajectory(const Trajectory& traj, double elliptic_tol) {
    DecomposedTrajectory dec;
    dec.source = &traj;
    dec.pu.reserve(traj.snaps.size());
    dec.qu.reserve(traj.snaps.size());
    for (const auto& s : traj.snaps) {
        LerayPair pair = leray_decompose(s.u, elliptic_tol);
        dec.pu.push_back(std::move(pair.solenoidal));
        dec.qu.push_back(std::move(pair.gradient_part));
    }
    return dec;
}

double q_decay(const DecomposedTrajectory& dec, double p_exp) {
    if (p_exp < 4.0 || p_exp >= 6.0)
        throw BadExponent("q_decay expects an exponent in [4,6)");
    std::vector<double> vals(dec.qu.size());
    for (std::size_t i = 0; i < dec.qu.size(); ++i) vals[i] = lp_norm(dec.qu[i], p_exp);
    return space_time_norm(vals, dec.source->snap_dt, 2.0);
}

double q_decay(const Trajectory& traj, double p_exp, double elliptic_tol) {
    return q_decay(decompose_trajectory(traj, elliptic_tol), p_exp);
}

double time_modulus(const DecomposedTrajectory& dec, double h) {
    const auto& traj = *dec.source;
    const double T = traj.horizon();
    if (!(h >= 0)) throw OffsetTooLarge("negative offset");
    if (h >= T) throw OffsetTooLarge("offset must be smaller than the horizon");
    if (h == 0.0) return 0.0;
    const double ratio = h / traj.snap_dt;
    const long m = std::lround(ratio);
    if (std::abs(ratio - double(m)) > 1e-9)
        throw OffsetTooLarge("offset is not a multiple of the snapshot cadence");
    const std::size_t n = dec.pu.size();
    std::vector<double> diff;
    for (std::size_t i = 0; i + m < n; ++i) {
        StaggeredField d = dec.pu[i + m];
        axpy(-1.0, dec.pu[i], d);
        diff.push_back(lp_norm(d, 2.0));
    }
    return space_time_norm(diff, traj.snap_dt, 2.0);
}

std::vector<std::uint8_t> local_window_mask(const DomainGeometry& g) {
    std::vector<std::uint8_t> mask(g.ncells(), 0);
    const bool no_obstacle = g.obstacle.kind == Obstacle::Kind::None;
    for (int k = 0; k < g.cells[2]; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const std::size_t c = g.cell_index(i, j, k);
                if (!g.wet(c)) continue;
                if (no_obstacle ||
                    g.obstacle.surface_distance(g.cell_center(i, j, k), g.dim) <= 1.0)
                    mask[c] = 1;
            }
    return mask;
}

double window_l2(const StaggeredField& u, const std::vector<std::uint8_t>& window) {
    const auto& g = *u.geom;
    double s = 0;
    for (int a = 0; a < g.dim; ++a) {
        const auto fc = g.face_counts(a);
        for (int k = 0; k < fc[2]; ++k)
            for (int j = 0; j < fc[1]; ++j)
                for (int i = 0; i < fc[0]; ++i) {
                    const std::size_t f = g.face_index(a, i, j, k);
                    if (!g.face_active[a][f]) continue;
                    // faces adjacent to at least one window cell
                    int hi[3] = {i, j, k};
                    int lo[3] = {i, j, k};
                    lo[a] -= 1;
                    if (g.periodic) lo[a] = (lo[a] + g.cells[a]) % g.cells[a];
                    const bool in_window =
                        window[g.cell_index(hi[0], hi[1], hi[2])] ||
                        window[g.cell_index(lo[0], lo[1], lo[2])];
                    if (!in_window) continue;
                    s += u.comp[a][f] * u.comp[a][f];
                }
    }
    return std::sqrt(s * g.cell_volume());
}

}  // namespace acns

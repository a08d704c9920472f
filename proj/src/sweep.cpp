#include "acns/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "acns/errors.hpp"
#include "acns/norms.hpp"
#include "acns/operators.hpp"

namespace acns {

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
    RateFit fit;
    std::vector<double> x, y;
    for (const auto& [eps, value] : points) {
        if (value > 0 && eps > 0) {
            x.push_back(std::log(eps));
            y.push_back(std::log(value));
        } else {
            fit.degenerate = true;
        }
    }
    const int n = int(x.size());
    if (n < 3) throw DegeneratePoints("rate fit needs at least 3 positive points");
    fit.n_used = n;
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw DegeneratePoints("rate fit needs distinct abscissae");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    if (n > 2) {
        const double se = std::sqrt(ss_res / (n - 2) / sxx);
        // two-sided 95% t quantiles for small samples
        static const double tq[] = {12.706, 4.303, 3.182, 2.776, 2.571,
                                    2.447,  2.365, 2.306, 2.262, 2.228};
        const int dof = n - 2;
        const double t = dof <= 10 ? tq[dof - 1] : 1.96;
        fit.ci_half = t * se;
    }
    return fit;
}

double compare_to_limit(const DecomposedTrajectory& eps_traj, const Trajectory& reference) {
    const auto& traj = *eps_traj.source;
    if (traj.geom->hash != reference.geom->hash)
        throw GridMismatch("trajectories use different grids");
    if (traj.snaps.size() != reference.snaps.size() ||
        std::abs(traj.snap_dt - reference.snap_dt) > 1e-12)
        throw GridMismatch("trajectories use different cadences");
    const auto window = local_window_mask(*traj.geom);
    std::vector<double> diff(traj.snaps.size());
    for (std::size_t i = 0; i < traj.snaps.size(); ++i) {
        StaggeredField d = eps_traj.pu[i];
        axpy(-1.0, reference.snaps[i].u, d);
        diff[i] = window_l2(d, window);
    }
    return space_time_norm(diff, traj.snap_dt, 2.0);
}

namespace {

EpsilonRow make_row(std::size_t idx, double eps, const SimConfig& cfg,
                    const GeometryPtr& geom, const SweepScenario& sc,
                    const Trajectory& reference, const SpectralBasis& basis) {
    EpsilonRow row;
    row.epsilon = eps;
    try {
        SimConfig c = cfg;
        c.epsilon = eps;
        RunResult rr = run(c, geom);
        if (sc.sink) sc.sink("eps_" + std::to_string(idx), rr);
        const auto& traj = rr.trajectory;

        row.initial_energy = rr.ledger.initial_energy();
        row.energy_residual = rr.ledger.final_residual();
        double p_linf = 0;
        for (const auto& r : rr.ledger.rows) p_linf = std::max(p_linf, r.p_l2);
        row.sqrt_eps_p_linf_l2 = std::sqrt(eps) * p_linf;
        row.eps_p_linf_l2 = eps * p_linf;

        row.bounds = apriori_bounds(traj, eps, basis);
        DecomposedTrajectory dec = decompose_trajectory(traj, c.tol_elliptic);
        for (double p : sc.q_exponents) row.q_decay.push_back(q_decay(dec, p));
        row.strichartz = strichartz_functional(traj, eps, basis);
        row.pu_minus_ref_l2loc = compare_to_limit(dec, reference);
        for (int m : sc.modulus_multiples) {
            const double h = m * traj.snap_dt;
            row.modulus.push_back(h < traj.horizon() ? time_modulus(dec, h) : 0.0);
        }
        row.complete = true;
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

ConvergenceReport run_sweep(const SweepScenario& scenario) {
    const auto& eps = scenario.epsilons;
    if (eps.size() < 4) throw Error("sweep needs at least 4 epsilon values");
    for (std::size_t i = 1; i < eps.size(); ++i)
        if (!(eps[i] < eps[i - 1]))
            throw Error("sweep epsilons must be strictly decreasing");
    if (scenario.q_exponents.empty())
        throw Error("sweep needs at least one gradient-part exponent");
    for (double p : scenario.q_exponents)
        if (p < 4.0 || p >= 6.0)
            throw Error("gradient-part exponents must lie in [4,6)");

    const GeometryPtr geom = build_domain(scenario.base.geometry);

    // Shared time grid, dictated by the smallest epsilon.
    SimConfig cfg = scenario.base;
    cfg.epsilon = eps.back();
    if (cfg.dt <= 0) {
        SimState probe = initialize(cfg, geom);
        const double limit = stable_dt(cfg, *geom, lp_norm(probe.u, INFINITY));
        const long n = std::max<long>(1, long(std::ceil(cfg.t_end / limit - 1e-12)));
        cfg.dt = cfg.t_end / double(n);
    }

    ConvergenceReport report;
    report.scenario_id = scenario.id;
    report.dim = geom->dim;
    report.cells = geom->cells;
    report.dt = cfg.dt;
    report.t_end = cfg.t_end;
    report.snap_dt = cfg.dt * std::max(1, cfg.snapshot_cadence);
    report.q_exponents = scenario.q_exponents;
    report.modulus_multiples = scenario.modulus_multiples;

    const auto basis = dirichlet_eigenbasis_cached(geom, cfg.basis_rank);
    RunResult reference = ns_run(cfg, geom);
    if (scenario.sink) scenario.sink("reference", reference);
    {
        const auto window = local_window_mask(*geom);
        std::vector<double> ref_norms(reference.trajectory.snaps.size());
        for (std::size_t i = 0; i < ref_norms.size(); ++i)
            ref_norms[i] = window_l2(reference.trajectory.snaps[i].u, window);
        report.ref_l2loc =
            space_time_norm(ref_norms, reference.trajectory.snap_dt, 2.0);
    }

    report.rows.assign(eps.size(), {});
    int workers = scenario.workers > 0 ? scenario.workers
                                       : int(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, int(eps.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < eps.size(); ++i)
            report.rows[i] =
                make_row(i, eps[i], cfg, geom, scenario, reference.trajectory, *basis);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= eps.size()) return;
                    report.rows[i] = make_row(i, eps[i], cfg, geom, scenario,
                                              reference.trajectory, *basis);
                }
            });
        for (auto& t : pool) t.join();
    }

    // Rate fits over the complete rows.
    auto fit_of = [&](auto&& get) -> RateFit {
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : report.rows)
            if (row.complete) pts.emplace_back(row.epsilon, get(row));
        try {
            return fit_rate(pts);
        } catch (const DegeneratePoints&) {
            RateFit f;
            f.degenerate = true;
            return f;
        }
    };
    report.eps_p_fit = fit_of([](const EpsilonRow& r) { return r.eps_p_linf_l2; });
    for (std::size_t qi = 0; qi < scenario.q_exponents.size(); ++qi)
        report.q_fits.push_back(fit_of(
            [qi](const EpsilonRow& r) { return qi < r.q_decay.size() ? r.q_decay[qi] : 0.0; }));
    report.limit_fit = fit_of([](const EpsilonRow& r) { return r.pu_minus_ref_l2loc; });

    auto strictly_decreasing = [&](auto&& get) {
        for (std::size_t i = 1; i < report.rows.size(); ++i) {
            if (!report.rows[i].complete || !report.rows[i - 1].complete) return false;
            if (!(get(report.rows[i]) < get(report.rows[i - 1]))) return false;
        }
        return !report.rows.empty();
    };
    auto& fl = report.flags;
    fl.energy_residual_ok = true;
    for (const auto& row : report.rows)
        if (!row.complete ||
            !(std::abs(row.energy_residual) <= 0.02 * row.initial_energy))
            fl.energy_residual_ok = false;
    fl.eps_p_decreasing =
        strictly_decreasing([](const EpsilonRow& r) { return r.eps_p_linf_l2; });
    fl.eps_p_slope_ok = !report.eps_p_fit.degenerate && report.eps_p_fit.slope >= 0.4;
    fl.q_decay_decreasing = strictly_decreasing(
        [](const EpsilonRow& r) { return r.q_decay.empty() ? 0.0 : r.q_decay[0]; });
    const double q_rate_floor =
        (6.0 - scenario.q_exponents[0]) / (36.0 * scenario.q_exponents[0]);
    fl.q_decay_slope_ok =
        !report.q_fits[0].degenerate && report.q_fits[0].slope >= q_rate_floor;
    fl.limit_decreasing =
        strictly_decreasing([](const EpsilonRow& r) { return r.pu_minus_ref_l2loc; });
    fl.limit_small_ok = !report.rows.empty() && report.rows.back().complete &&
                        report.rows.back().pu_minus_ref_l2loc <= 0.1 * report.ref_l2loc;
    return report;
}

}  // namespace acns

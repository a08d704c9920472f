#include "acns/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "acns/errors.hpp"
#include "acns/norms.hpp"
#include "acns/operators.hpp"
#include "acns/snapshot_io.hpp"

namespace acns {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-exact newlines
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << text;
}

}  // namespace

void write_ledger_csv(const std::filesystem::path& path, const EnergyLedger& ledger) {
    std::string s = "# acns-ledger-v1\n";
    s += "step,time,kinetic,pressure_part,energy,grad_sq,dissipation,residual,u_l2,p_l2,div_l2\n";
    for (const auto& r : ledger.rows) {
        s += std::to_string(r.step);
        for (double v : {r.time, r.kinetic, r.pressure_part, r.energy, r.grad_sq,
                         r.dissipation_cum, r.residual, r.u_l2, r.p_l2, r.div_l2}) {
            s += ',';
            s += format_double(v);
        }
        s += '\n';
    }
    write_text(path, s);
}

std::string diagnostics_csv_text(const Trajectory& traj, double epsilon, double mu,
                                 const SpectralBasis& basis) {
    std::string s = "# acns-diagnostics-v1 basis_rank=" + std::to_string(basis.rank) + "\n";
    s += "snap,time,u_l2,p_l2,div_l2,grad_sq,energy,dissipation,residual,p_wm22,divu_hm1\n";
    double dissipation = 0, grad_prev = 0, e0 = 0;
    for (std::size_t n = 0; n < traj.snaps.size(); ++n) {
        const auto& snap = traj.snaps[n];
        const double u2 = inner(snap.u, snap.u);
        const double p2 = inner(snap.p, snap.p);
        const double grad_sq = dirichlet_energy(snap.u);
        const double energy = 0.5 * u2 + 0.5 * epsilon * p2;
        if (n == 0)
            e0 = energy;
        else
            dissipation += 0.5 * traj.snap_dt * mu * (grad_prev + grad_sq);
        grad_prev = grad_sq;
        const ScalarField div = divergence(snap.u);
        const double p_wm22 = sobolev_norm(snap.p, -2.0, basis).value;
        const double divu_hm1 = sobolev_norm(div, -1.0, basis).value;
        s += std::to_string(n);
        for (double v : {snap.time, std::sqrt(u2), std::sqrt(p2), lp_norm(div, 2.0),
                         grad_sq, energy, dissipation, energy + dissipation - e0, p_wm22,
                         divu_hm1}) {
            s += ',';
            s += format_double(v);
        }
        s += '\n';
    }
    return s;
}

void write_diagnostics_csv(const std::filesystem::path& path, const Trajectory& traj,
                           double epsilon, double mu, const SpectralBasis& basis) {
    write_text(path, diagnostics_csv_text(traj, epsilon, mu, basis));
}

void write_report_csv(const std::filesystem::path& path, const ConvergenceReport& rep) {
    std::string s = "# acns-report-v1\n";
    s += "epsilon,complete,error,E0,energy_residual,sqrt_eps_p_LinfL2,eps_p_LinfL2,"
         "divu_L2Hm1,grad_u_L2L2,u_LinfL2,u_L2L6,conv_L2L1,conv_L1L32,divuu_L2L1,"
         "divuu_L1L32";
    for (double q : rep.q_exponents) {
        s += ",q_decay_p" + format_double(q);
    }
    s += ",strichartz_lhs,strichartz_rhs,strichartz_ratio,pu_minus_ref_L2loc";
    for (int m : rep.modulus_multiples) s += ",modulus_h" + std::to_string(m);
    s += '\n';
    for (const auto& r : rep.rows) {
        s += format_double(r.epsilon);
        s += r.complete ? ",1," : ",0,";
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        s += err;
        for (double v :
             {r.initial_energy, r.energy_residual, r.sqrt_eps_p_linf_l2, r.eps_p_linf_l2,
              r.bounds.div_u_l2_hm1, r.bounds.grad_u_l2_l2, r.bounds.u_linf_l2,
              r.bounds.u_l2_l6, r.bounds.conv_l2_l1, r.bounds.conv_l1_l32,
              r.bounds.divu_u_l2_l1, r.bounds.divu_u_l1_l32}) {
            s += ',';
            s += format_double(v);
        }
        for (std::size_t i = 0; i < rep.q_exponents.size(); ++i) {
            s += ',';
            s += format_double(i < r.q_decay.size() ? r.q_decay[i] : 0.0);
        }
        for (double v : {r.strichartz.lhs, r.strichartz.rhs, r.strichartz.ratio,
                         r.pu_minus_ref_l2loc}) {
            s += ',';
            s += format_double(v);
        }
        for (std::size_t i = 0; i < rep.modulus_multiples.size(); ++i) {
            s += ',';
            s += format_double(i < r.modulus.size() ? r.modulus[i] : 0.0);
        }
        s += '\n';
    }
    // fitted slopes as trailing comment lines so the table stays rectangular
    auto fit_line = [&](const std::string& name, const RateFit& f) {
        s += "# fit " + name + " slope=" + format_double(f.slope) +
             " ci_half=" + format_double(f.ci_half) + " n=" + std::to_string(f.n_used) +
             (f.degenerate ? " degenerate" : "") + "\n";
    };
    fit_line("eps_p_LinfL2", rep.eps_p_fit);
    for (std::size_t i = 0; i < rep.q_fits.size(); ++i)
        fit_line("q_decay_p" + format_double(rep.q_exponents[i]), rep.q_fits[i]);
    fit_line("pu_minus_ref_L2loc", rep.limit_fit);
    const auto& fl = rep.flags;
    auto flag = [](bool ok) { return ok ? "pass" : "fail"; };
    s += std::string("# flags energy_residual=") + flag(fl.energy_residual_ok) +
         " eps_p_decreasing=" + flag(fl.eps_p_decreasing) +
         " eps_p_slope=" + flag(fl.eps_p_slope_ok) +
         " q_decay_decreasing=" + flag(fl.q_decay_decreasing) +
         " q_decay_slope=" + flag(fl.q_decay_slope_ok) +
         " limit_decreasing=" + flag(fl.limit_decreasing) +
         " limit_small=" + flag(fl.limit_small_ok) + "\n";
    write_text(path, s);
}

void write_summary_text(const std::filesystem::path& path, const ConvergenceReport& rep) {
    std::string s;
    s += "scenario: " + rep.scenario_id + "\n";
    s += "grid: " + std::to_string(rep.cells[0]) + "x" + std::to_string(rep.cells[1]);
    if (rep.dim == 3) s += "x" + std::to_string(rep.cells[2]);
    s += "  dt=" + format_double(rep.dt) + "  T=" + format_double(rep.t_end) + "\n";
    s += "reference |u_ref| over window: " + format_double(rep.ref_l2loc) + "\n\n";
    s += "eps          E_residual    sqrt(e)|p|    |e p|        |Qu|_L2L4    |Pu-u_ref|   stz_ratio\n";
    for (const auto& r : rep.rows) {
        if (!r.complete) {
            s += format_double(r.epsilon) + "  FAILED: " + r.error + "\n";
            continue;
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-11.4g %13.5g %13.5g %12.5g %12.5g %12.5g %9.4g\n",
                      r.epsilon, r.energy_residual, r.sqrt_eps_p_linf_l2, r.eps_p_linf_l2,
                      r.q_decay.empty() ? 0.0 : r.q_decay.front(), r.pu_minus_ref_l2loc,
                      r.strichartz.ratio);
        s += buf;
    }
    s += "\nfitted log-log slopes (95% half-widths):\n";
    auto fit_line = [&](const std::string& name, const RateFit& f) {
        s += "  " + name + ": " + format_double(f.slope) + " +/- " +
             format_double(f.ci_half) + (f.degenerate ? "  [degenerate points dropped]" : "") +
             "\n";
    };
    fit_line("|eps p|_LinfL2", rep.eps_p_fit);
    for (std::size_t i = 0; i < rep.q_fits.size(); ++i)
        fit_line("|Qu|_L2L" + format_double(rep.q_exponents[i]), rep.q_fits[i]);
    fit_line("|Pu-u_ref|_L2loc", rep.limit_fit);

    const auto& fl = rep.flags;
    auto verdict = [&](const char* name, bool ok) {
        s += std::string("  [") + (ok ? "pass" : "FAIL") + "] " + name + "\n";
    };
    s += "\nconvergence verdicts:\n";
    verdict("energy identity residual <= 2% of E(0) on every run", fl.energy_residual_ok);
    verdict("|eps p| strictly decreasing", fl.eps_p_decreasing);
    verdict("|eps p| fitted slope >= 0.4", fl.eps_p_slope_ok);
    verdict("|Qu| strictly decreasing", fl.q_decay_decreasing);
    verdict("|Qu| fitted slope above the analytic rate", fl.q_decay_slope_ok);
    verdict("|Pu - u_ref| strictly decreasing", fl.limit_decreasing);
    verdict("|Pu - u_ref| within 10% of |u_ref| at the smallest eps", fl.limit_small_ok);

    s += "\nNote: weak L2H1 convergence has no finite test; the table records the\n";
    s += "uniform boundedness of |grad u| in L2L2 as its testable shadow.\n";
    write_text(path, s);
}

void write_run_artifacts(const std::filesystem::path& dir, const ResolvedConfig& cfg,
                         const RunResult& result, double epsilon,
                         const SpectralBasis& basis, bool write_snapshots) {
    std::filesystem::create_directories(dir);
    ResolvedConfig echo_cfg = cfg;
    echo_cfg.sim.epsilon = epsilon;
    write_text(dir / "config.echo.cfg", config_echo(echo_cfg, result.trajectory.dt));
    write_ledger_csv(dir / "ledger.csv", result.ledger);
    write_diagnostics_csv(dir / "diagnostics.csv", result.trajectory, epsilon, cfg.sim.mu,
                          basis);
    if (write_snapshots) {
        const auto snapdir = dir / "snaps";
        std::filesystem::create_directories(snapdir);
        for (std::size_t i = 0; i < result.trajectory.snaps.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "snap_%06zu.acns", i);
            const auto& s = result.trajectory.snaps[i];
            write_state_snapshot(snapdir / name, s.u, s.p, epsilon, s.time);
        }
    }
}

Trajectory read_run_trajectory(const std::filesystem::path& dir, const GeometryPtr& geom) {
    Trajectory traj;
    traj.geom = geom;
    const auto snapdir = dir / "snaps";
    std::vector<std::filesystem::path> files;
    if (std::filesystem::exists(snapdir))
        for (const auto& e : std::filesystem::directory_iterator(snapdir))
            if (e.path().extension() == ".acns") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw CorruptSnapshot("no snapshots under " + snapdir.string());
    for (const auto& f : files) {
        auto snap = read_state_snapshot(f, geom);
        traj.epsilon = snap.header.epsilon;
        traj.snaps.push_back({snap.header.time, std::move(snap.u), std::move(snap.p)});
    }
    if (traj.snaps.size() >= 2)
        traj.snap_dt = traj.snaps[1].time - traj.snaps[0].time;
    return traj;
}

}  // namespace acns

#pragma once

#include <functional>
#include <optional>
#include <string>

#include "acns/acoustics.hpp"
#include "acns/diagnostics.hpp"
#include "acns/ns_reference.hpp"

namespace acns {

struct RateFit {
    double slope = 0;
    double intercept = 0;
    double ci_half = 0;  // 95% half-width on the slope
    int n_used = 0;
    bool degenerate = false;
};

/// Least squares of log(value) on log(eps). Points with value <= 0 are
/// dropped with the degenerate flag; fewer than 3 usable points throws
/// DegeneratePoints.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

/// |Pu_eps - u_ref| over the local window and [0,T]; both trajectories
/// must share the grid and cadence.
double compare_to_limit(const DecomposedTrajectory& eps_traj, const Trajectory& reference);

struct SweepScenario {
    std::string id = "scenario";
    SimConfig base;                      // epsilon ignored; dt may be 0 (auto)
    std::vector<double> epsilons;        // strictly decreasing, >= 4 entries
    std::vector<double> q_exponents{4.0, 5.0};
    std::vector<int> modulus_multiples{2, 4, 8, 16};
    int workers = 0;                     // 0 = hardware concurrency

    /// Optional per-run sink ("reference" or "eps_<i>"), invoked as soon as
    /// a run finishes; must be safe to call from worker threads.
    std::function<void(const std::string& name, const RunResult&)> sink;
};

struct EpsilonRow {
    double epsilon = 0;
    bool complete = false;
    std::string error;

    double initial_energy = 0;
    double energy_residual = 0;        // at t = T
    double sqrt_eps_p_linf_l2 = 0;
    double eps_p_linf_l2 = 0;
    BoundsReport bounds;
    std::vector<double> q_decay;       // one per exponent
    StrichartzRow strichartz;
    double pu_minus_ref_l2loc = 0;
    std::vector<double> modulus;       // one per multiple
};

/// Sweep-level verdicts on the quantitative convergence contracts.
struct SweepFlags {
    bool energy_residual_ok = false;  // |residual| <= 0.02 E0 for every row
    bool eps_p_decreasing = false;
    bool eps_p_slope_ok = false;      // fitted slope >= 0.4
    bool q_decay_decreasing = false;
    bool q_decay_slope_ok = false;    // fitted slope >= (6-p)/(36p) at p = 4
    bool limit_decreasing = false;
    bool limit_small_ok = false;      // last row <= 0.1 |u_ref|
};

struct ConvergenceReport {
    std::string scenario_id;
    std::string schema = "acns-report-v1";
    int dim = 0;
    std::array<int, 3> cells{};
    double dt = 0;
    double t_end = 0;
    double snap_dt = 0;
    double ref_l2loc = 0;                // reference norm over the window
    std::vector<double> q_exponents;
    std::vector<int> modulus_multiples;
    std::vector<EpsilonRow> rows;        // epsilon strictly decreasing
    RateFit eps_p_fit;                   // |eps p| in Linf L2 vs eps
    std::vector<RateFit> q_fits;         // per exponent
    RateFit limit_fit;                   // |Pu - u_ref| vs eps
    SweepFlags flags;
};

/// Run the artificial-compressibility solver per epsilon plus one reference
/// run on the same grid and time step (chosen for the smallest epsilon so
/// all runs share the time grid), then fit the decay rates. Per-row errors
/// are captured without aborting the sweep.
ConvergenceReport run_sweep(const SweepScenario& scenario);

}  // namespace acns

#pragma once

#include "acns/ac_solver.hpp"
#include "acns/elliptic.hpp"
#include "acns/trajectory.hpp"

namespace acns {

/// Recompute the energy ledger from a (possibly coarse-cadence) trajectory.
EnergyLedger energy_ledger(const Trajectory& traj, double epsilon, double mu);

/// The a priori bound table: each entry is one of the uniform-in-epsilon
/// quantities the energy identity controls.
struct BoundsReport {
    double epsilon = 0;
    double sqrt_eps_p_linf_l2 = 0;   // sqrt(eps) |p|, sup in time of L2
    double div_u_l2_hm1 = 0;         // |div u| in L2_t H^-1 (compactness surrogate)
    double grad_u_l2_l2 = 0;         // |grad u| in L2_t L2
    double u_linf_l2 = 0;            // |u| in Linf_t L2
    double u_l2_l6 = 0;              // |u| in L2_t L6 (metadata in 2-D)
    double conv_l2_l1 = 0;           // (u.grad)u in L2_t L1
    double conv_l1_l32 = 0;          // (u.grad)u in L1_t L^{3/2}
    double divu_u_l2_l1 = 0;         // (div u)u in L2_t L1
    double divu_u_l1_l32 = 0;        // (div u)u in L1_t L^{3/2}
};

BoundsReport apriori_bounds(const Trajectory& traj, double epsilon,
                            const SpectralBasis& basis);

/// Per-snapshot Leray split of a trajectory, shared by the decay, modulus
/// and limit-comparison diagnostics.
struct DecomposedTrajectory {
    const Trajectory* source = nullptr;
    std::vector<StaggeredField> pu;
    std::vector<StaggeredField> qu;
};

DecomposedTrajectory decompose_trajectory(const Trajectory& traj,
                                          double elliptic_tol = 1e-8);

/// |Qu| in L2_t Lp_x for p in [4,6).
double q_decay(const DecomposedTrajectory& dec, double p_exp);
double q_decay(const Trajectory& traj, double p_exp, double elliptic_tol = 1e-8);

/// Time-translation modulus of the solenoidal part,
/// |Pu(.+h) - Pu(.)| in L2([0,T-h] x Omega). h must be a multiple of the
/// snapshot spacing and smaller than the horizon.
double time_modulus(const DecomposedTrajectory& dec, double h);

/// Cells of the local comparison window: wet cells within distance 1 of the
/// obstacle surface (every wet cell when there is no obstacle).
std::vector<std::uint8_t> local_window_mask(const DomainGeometry& geom);

/// L2 norm of a staggered field restricted to faces touching window cells.
double window_l2(const StaggeredField& u, const std::vector<std::uint8_t>& window);

}  // namespace acns

#pragma once

#include "acns/elliptic.hpp"
#include "acns/trajectory.hpp"

namespace acns {

/// Trajectory relabeled on the acoustic time axis tau = t/sqrt(eps); the
/// fields themselves are unchanged pointwise. After split_pressure the
/// structure also carries the two pressure components in spectral form.
/// The components vanish on the obstacle cells and at the wall faces at
/// every tau: the Dirichlet condition is built into the basis.
struct AcousticFields {
    const Trajectory* traj = nullptr;
    double epsilon = 1;
    double dtau = 0;
    std::vector<double> tau;

    // filled by split_pressure (coefficients in the Dirichlet basis)
    std::vector<std::vector<double>> q1_hat, q2_hat;
    std::vector<std::vector<double>> p1_hat, p2_hat;
    std::vector<double> defect_wm22;  // |p - (p1+p2)| in W^{-2,2} per tau
};

AcousticFields rescale(const Trajectory& traj, double epsilon);

/// Spectral coefficient series the wave machinery runs on: the pressure,
/// div(u), and div(convective term) of every snapshot.
struct AcousticSeries {
    std::vector<std::vector<double>> p_hat, divu_hat, divN_hat;
};

AcousticSeries spectral_series(const AcousticFields& fields, const SpectralBasis& basis);

/// W^{-2,2} residual of the rescaled pressure wave equation per interior
/// tau node (second differences in tau).
std::vector<double> wave_residual(const AcousticFields& fields, const SpectralBasis& basis);
std::vector<double> wave_residual(const AcousticFields& fields, const AcousticSeries& series,
                                  const SpectralBasis& basis);

/// Integrate the two component waves (leapfrog in tau, Dirichlet data) and
/// reconstruct p1 = lap(q1), p2 = sqrt(-lap)(q2) spectrally, recording the
/// splitting defect per tau. Throws CFLViolation when dtau > 0.5 min(dx).
void split_pressure(AcousticFields& fields, const AcousticSeries& series,
                    const SpectralBasis& basis);

struct StrichartzRow {
    double lhs = 0;
    double rhs = 0;
    double ratio = 0;  // 0/0 reported as 0
};

/// Both sides of the dispersive estimate in unrescaled time; dp/dt is taken
/// algebraically as -div(u)/eps.
StrichartzRow strichartz_functional(const Trajectory& traj, double epsilon,
                                    const SpectralBasis& basis);

}  // namespace acns

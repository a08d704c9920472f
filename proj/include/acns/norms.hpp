#pragma once

#include <vector>

#include "acns/elliptic.hpp"
#include "acns/field.hpp"

namespace acns {

/// Lp norm over wet cells, (sum |f|^p dV)^(1/p); max over wet cells for
/// p = infinity. Throws BadExponent for p < 1.
double lp_norm(const ScalarField& f, double p);

/// Lp norm of a staggered field, taken component-wise over the face
/// lattices with the cell-volume weight. For p = 2 this is exactly the
/// kinetic energy norm the solver conserves; for other p it is equivalent
/// to the magnitude-based norm up to a dimension constant, which cancels in
/// every rate fit.
double lp_norm(const StaggeredField& u, double p);

/// Composite time-space norm: trapezoidal quadrature in time of already
/// computed per-snapshot spatial norms. q = infinity takes the max.
double space_time_norm(const std::vector<double>& per_snapshot, double dt, double q);

struct SpectralNorm {
    double value = 0;
    double l2_capture = 1;  // fraction of ||f||_{L2}^2 inside the basis span
};

/// Homogeneous Sobolev norm of order gamma through the Dirichlet
/// eigenbasis: sqrt(sum f_hat(j)^2 lambda_j^gamma) over the retained rank.
/// Reports the capture fraction; throws InsufficientRank when gamma > 0 and
/// the capture drops below `capture_min`.
SpectralNorm sobolev_norm(const ScalarField& f, double gamma, const SpectralBasis& basis,
                          double capture_min = 0.9);

/// Negative-order W^{-k,r} norm realized as the Lr norm of the spectral
/// fractional inverse (-lap)^(-k/2) f. k in {1,2,3}, r in {2,4}.
SpectralNorm negative_sobolev_lp_norm(const ScalarField& f, int k, double r,
                                      const SpectralBasis& basis);

}  // namespace acns

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "acns/field.hpp"

namespace acns {

struct PoissonOptions {
    double tol = 1e-8;          // relative residual target
    int max_iter_factor = 10;   // cap = factor * ncells
    bool remove_mean_rhs = false;  // Neumann only: project out the mean
    const ScalarField* initial_guess = nullptr;
};

/// Solve div(grad(x)) = rhs with zero flux through all pinned faces and
/// zero mean over the wet region. Conjugate gradients with Jacobi
/// preconditioning; the null space is handled by mean projection every
/// iteration. Throws IncompatibleRHS unless remove_mean_rhs is set, and
/// NoConvergence past the iteration cap.
ScalarField solve_poisson_neumann(const ScalarField& rhs, const PoissonOptions& opt = {});

/// Solve laplacian(x) = rhs with the homogeneous Dirichlet mirror
/// convention on obstacle and box faces.
ScalarField solve_poisson_dirichlet(const ScalarField& rhs, const PoissonOptions& opt = {});

/// Truncated eigenbasis of the Dirichlet Laplacian on the wet region.
/// Modes are L2-orthonormal cell fields with ascending positive
/// eigenvalues; they power the fractional Sobolev norms and the acoustic
/// spectral calculus. Immutable and freely shared between threads.
class SpectralBasis {
public:
    GeometryPtr geom;
    int rank = 0;
    std::vector<double> eigenvalue;           // ascending
    std::vector<std::vector<double>> mode;    // rank x ncells

    /// Coefficients f_hat(j) = <f, v_j> with the volume measure.
    std::vector<double> coefficients(const ScalarField& f) const;

    /// Sum of coef[j] * lambda_j^power * v_j.
    ScalarField synthesize(std::span<const double> coef, double power = 0.0) const;

    void check_match(const GeometryPtr& g) const;
};

/// Compute the K smallest Dirichlet eigenpairs by a block Krylov iteration
/// on the inverse (each application is one Dirichlet Poisson solve), with
/// full reorthogonalization and a Rayleigh-Ritz extraction. Residuals are
/// verified directly against the stencil operator.
SpectralBasis dirichlet_eigenbasis(const GeometryPtr& geom, int K);

/// Cached variant: consults an in-process memo and, when ACNS_CACHE_DIR is
/// set, a binary cache file keyed by geometry hash and rank.
std::shared_ptr<const SpectralBasis> dirichlet_eigenbasis_cached(const GeometryPtr& geom,
                                                                 int K);

}  // namespace acns

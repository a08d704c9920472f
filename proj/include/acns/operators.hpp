#pragma once

#include "acns/field.hpp"

namespace acns {

/// MAC divergence: per wet cell, sum of face differences over spacing.
/// Solid cells stay zero.
ScalarField divergence(const StaggeredField& u);

/// MAC gradient on active faces, zero on pinned faces. Together with
/// divergence this pair is adjoint: <grad p, u> = -<p, div u> exactly for
/// fields vanishing on pinned faces. That pairing is what makes the Leray
/// projector orthogonal and the energy ledger exact, so it is frozen as
/// part of the format contract.
StaggeredField gradient(const ScalarField& p);

/// Cell Laplacian with the homogeneous Dirichlet mirror convention: a
/// neighbor outside the wet region (solid cell or beyond a box face)
/// contributes -p(c), which places the zero at the shared face. The
/// spectral basis diagonalizes exactly this operator.
ScalarField laplacian(const ScalarField& p);

/// Same stencil acting on the negated operator: returns -laplacian(p),
/// i.e. the symmetric positive definite form used by solvers.
ScalarField neg_laplacian_dirichlet(const ScalarField& p);

/// Divergence of gradient with the active-face mask: the Neumann Laplacian
/// (zero flux through pinned faces). Returns -div(grad p).
ScalarField neg_laplacian_neumann(const ScalarField& p);

// Allocation-free variants for solver inner loops.
void apply_neg_laplacian_dirichlet(const ScalarField& p, ScalarField& out);
void apply_neg_laplacian_neumann(const ScalarField& p, ScalarField& out);

/// Viscous Laplacian on velocity components, zero-extension outside the
/// active set.
StaggeredField velocity_laplacian(const StaggeredField& u);

/// Convective operator in the skew-symmetric centered form: the average of
/// the advective and divergence forms, which equals (u.grad)u + (div u)u/2
/// in the continuum. The discrete form satisfies <N(u),u> = 0 to roundoff,
/// so the semi-discrete energy identity carries no convective leak.
StaggeredField convective_term(const StaggeredField& u);

/// Plain centered advective form (u.grad)u, used by the bounds reports.
StaggeredField advective_part(const StaggeredField& u);

/// The correction term (div u)u/2 with face-interpolated divergence.
StaggeredField divergence_correction(const StaggeredField& u);

/// Discrete Dirichlet energy |grad u|^2 integrated over the domain,
/// equal to -<velocity_laplacian(u), u> exactly.
double dirichlet_energy(const StaggeredField& u);

// L2 inner products with the cell-volume measure.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const StaggeredField& a, const StaggeredField& b);

}  // namespace acns

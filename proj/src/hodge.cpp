#include "acns/hodge.hpp"

#include <algorithm>

#include "acns/norms.hpp"
#include "acns/operators.hpp"

namespace acns {

LerayPair leray_decompose(const StaggeredField& u, double elliptic_tol) {
    LerayPair out;
    const ScalarField div = divergence(u);
    PoissonOptions opt;
    opt.remove_mean_rhs = true;  // divergence integrates to roundoff, not zero
    // The projection contract |div Pu| <= 10 tol |u| is relative to the
    // field, not its (much larger) divergence; rescale the solver target.
    const double nu = lp_norm(u, 2.0);
    const double nd = lp_norm(div, 2.0);
    opt.tol = nd > 0 ? std::min(elliptic_tol, 5.0 * elliptic_tol * nu / nd) : elliptic_tol;
    out.potential = solve_poisson_neumann(div, opt);
    out.gradient_part = gradient(out.potential);
    out.solenoidal = u;
    axpy(-1.0, out.gradient_part, out.solenoidal);
    return out;
}

}  // namespace acns

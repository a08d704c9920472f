#pragma once

#include <array>
#include <vector>

#include "acns/field.hpp"

namespace acns {

/// Friedrichs-type smoothing kernel of radius alpha: the standard compactly
/// supported bump exp(-1/(1-r^2)) sampled on the grid and normalized to
/// unit discrete mass. With alpha below the spacing the kernel degenerates
/// to the identity.
struct Mollifier {
    double alpha = 0;
    std::array<int, 3> halfwidth{0, 0, 0};
    std::vector<double> weights;  // (2h0+1)(2h1+1)(2h2+1) table, sum*dV = 1

    static Mollifier build(double alpha, const DomainGeometry& geom);

    double weight(int oi, int oj, int ok) const {
        const int w0 = 2 * halfwidth[0] + 1, w1 = 2 * halfwidth[1] + 1;
        return weights[(oi + halfwidth[0]) +
                       w0 * ((oj + halfwidth[1]) + w1 * (ok + halfwidth[2]))];
    }
};

/// Convolve with the kernel over the wet region. Near boundaries the kernel
/// is renormalized over the cells actually visible so constants are
/// preserved everywhere.
ScalarField mollify(const ScalarField& f, const Mollifier& m);

/// Per-component convolution on the face lattices, renormalized over active
/// faces.
StaggeredField mollify(const StaggeredField& u, const Mollifier& m);

}  // namespace acns

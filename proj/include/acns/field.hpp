#pragma once

#include <array>
#include <memory>
#include <vector>

#include "acns/geometry.hpp"

namespace acns {

using GeometryPtr = std::shared_ptr<const DomainGeometry>;

/// Cell-centered scalar. Values on solid cells are kept at zero.
struct ScalarField {
    GeometryPtr geom;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(GeometryPtr g) : geom(std::move(g)), v(geom->ncells(), 0.0) {}

    double& operator[](std::size_t c) { return v[c]; }
    double operator[](std::size_t c) const { return v[c]; }
    std::size_t size() const { return v.size(); }
};

/// Face-centered (MAC) velocity. Component a lives on the axis-a face
/// lattice; entries on inactive faces stay at zero, which is how the
/// homogeneous velocity boundary condition is realized.
struct StaggeredField {
    GeometryPtr geom;
    std::array<std::vector<double>, 3> comp;

    StaggeredField() = default;
    explicit StaggeredField(GeometryPtr g) : geom(std::move(g)) {
        for (int a = 0; a < geom->dim; ++a) comp[a].assign(geom->nfaces(a), 0.0);
    }

    std::vector<double>& operator[](int axis) { return comp[axis]; }
    const std::vector<double>& operator[](int axis) const { return comp[axis]; }
};

void require_same_geometry(const GeometryPtr& a, const GeometryPtr& b);

bool all_finite(const ScalarField& f);
bool all_finite(const StaggeredField& u);

/// Zero every entry whose face is not active (pinned boundary faces).
void enforce_pinned_faces(StaggeredField& u);
/// Zero every entry on a solid cell.
void enforce_solid_zero(ScalarField& f);

// Small value-semantics helpers used all over the solvers.
void axpy(double a, const ScalarField& x, ScalarField& y);    // y += a*x
void axpy(double a, const StaggeredField& x, StaggeredField& y);
void scale(ScalarField& f, double a);
void scale(StaggeredField& u, double a);

}  // namespace acns

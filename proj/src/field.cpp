#include "acns/field.hpp"

#include <cmath>

#include "acns/errors.hpp"

namespace acns {

void require_same_geometry(const GeometryPtr& a, const GeometryPtr& b) {
    if (!a || !b || a->hash != b->hash)
        throw GeometryMismatch("fields reference different geometries");
}

bool all_finite(const ScalarField& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const StaggeredField& u) {
    for (int a = 0; a < u.geom->dim; ++a)
        for (double x : u.comp[a])
            if (!std::isfinite(x)) return false;
    return true;
}

void enforce_pinned_faces(StaggeredField& u) {
    const auto& g = *u.geom;
    for (int a = 0; a < g.dim; ++a) {
        const auto& act = g.face_active[a];
        auto& c = u.comp[a];
        for (std::size_t f = 0; f < c.size(); ++f)
            if (!act[f]) c[f] = 0.0;
    }
}

void enforce_solid_zero(ScalarField& f) {
    const auto& g = *f.geom;
    for (std::size_t c = 0; c < f.v.size(); ++c)
        if (!g.wet(c)) f.v[c] = 0.0;
}

void axpy(double a, const ScalarField& x, ScalarField& y) {
    for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += a * x.v[i];
}

void axpy(double a, const StaggeredField& x, StaggeredField& y) {
    for (int ax = 0; ax < y.geom->dim; ++ax)
        for (std::size_t i = 0; i < y.comp[ax].size(); ++i)
            y.comp[ax][i] += a * x.comp[ax][i];
}

void scale(ScalarField& f, double a) {
    for (double& x : f.v) x *= a;
}

void scale(StaggeredField& u, double a) {
    for (int ax = 0; ax < u.geom->dim; ++ax)
        for (double& x : u.comp[ax]) x *= a;
}

}  // namespace acns

#include "acns/operators.hpp"

#include <cmath>

#include "acns/errors.hpp"

namespace acns {

namespace {

// Lattice accessor with zero extension (bounded) or wrap (periodic).
struct Lat {
    int n[3];
    bool per;

    static Lat cells(const DomainGeometry& g) {
        return {{g.cells[0], g.cells[1], g.cells[2]}, g.periodic};
    }
    static Lat faces(const DomainGeometry& g, int axis) {
        auto fc = g.face_counts(axis);
        return {{fc[0], fc[1], fc[2]}, g.periodic};
    }

    bool wrap(int& i, int& j, int& k) const {
        if (per) {
            i = (i % n[0] + n[0]) % n[0];
            j = (j % n[1] + n[1]) % n[1];
            k = (k % n[2] + n[2]) % n[2];
            return true;
        }
        return i >= 0 && i < n[0] && j >= 0 && j < n[1] && k >= 0 && k < n[2];
    }
    std::size_t idx(int i, int j, int k) const {
        return std::size_t(i) + std::size_t(n[0]) * (std::size_t(j) + std::size_t(n[1]) * k);
    }
    double at(const std::vector<double>& v, int i, int j, int k) const {
        if (!wrap(i, j, k)) return 0.0;
        return v[idx(i, j, k)];
    }
};

// Interpolation of component b to a point of the axis-a face lattice.
// For b == a this is the value itself; otherwise the 4-point MAC average
// over the two cells the face separates. Out-of-range reads are zero; they
// only occur where the multiplying velocity is pinned to zero anyway.
inline double interp_component(const StaggeredField& u, const Lat& lat_b, int a, int b,
                               int i, int j, int k) {
    if (a == b) return lat_b.at(u.comp[b], i, j, k);
    int c[3] = {i, j, k};
    // cells adjacent to the a-face: a-index ia-1 and ia
    int lo[3] = {c[0], c[1], c[2]};
    lo[a] -= 1;
    double s = 0;
    for (int cell = 0; cell < 2; ++cell) {
        const int* cc = cell == 0 ? lo : c;
        int f0[3] = {cc[0], cc[1], cc[2]};
        int f1[3] = {cc[0], cc[1], cc[2]};
        f1[b] += 1;
        s += lat_b.at(u.comp[b], f0[0], f0[1], f0[2]);
        s += lat_b.at(u.comp[b], f1[0], f1[1], f1[2]);
    }
    return 0.25 * s;
}

}  // namespace

ScalarField divergence(const StaggeredField& u) {
    const auto& g = *u.geom;
    ScalarField d(u.geom);
    for (int k = 0; k < g.cells[2]; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const std::size_t c = g.cell_index(i, j, k);
                if (!g.wet(c)) continue;
                double s = 0;
                int ci[3] = {i, j, k};
                for (int a = 0; a < g.dim; ++a) {
                    int hi[3] = {ci[0], ci[1], ci[2]};
                    hi[a] += 1;
                    if (g.periodic) hi[a] %= g.cells[a];
                    s += (u.comp[a][g.face_index(a, hi[0], hi[1], hi[2])] -
                          u.comp[a][g.face_index(a, ci[0], ci[1], ci[2])]) /
                         g.spacing[a];
                }
                d.v[c] = s;
            }
    return d;
}

StaggeredField gradient(const ScalarField& p) {
    const auto& g = *p.geom;
    StaggeredField grad(p.geom);
    for (int a = 0; a < g.dim; ++a) {
        const auto fc = g.face_counts(a);
        for (int k = 0; k < fc[2]; ++k)
            for (int j = 0; j < fc[1]; ++j)
                for (int i = 0; i < fc[0]; ++i) {
                    const std::size_t f = g.face_index(a, i, j, k);
                    if (!g.face_active[a][f]) continue;
                    int hi[3] = {i, j, k};
                    int lo[3] = {i, j, k};
                    lo[a] -= 1;
                    if (g.periodic) lo[a] = (lo[a] + g.cells[a]) % g.cells[a];
                    grad.comp[a][f] = (p.v[g.cell_index(hi[0], hi[1], hi[2])] -
                                       p.v[g.cell_index(lo[0], lo[1], lo[2])]) /
                                      g.spacing[a];
                }
    }
    return grad;
}

namespace {

// Shared stencil for the two cell Laplacians. `dirichlet` selects the
// mirror ghost (-p(c) outside the wet set); otherwise fluxes through
// inactive faces vanish (Neumann).
void neg_cell_laplacian(const ScalarField& p, bool dirichlet, ScalarField& out) {
    const auto& g = *p.geom;
    const Lat lc = Lat::cells(g);
    if (out.v.size() != p.v.size()) out = ScalarField(p.geom);
    for (int k = 0; k < g.cells[2]; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                const std::size_t c = g.cell_index(i, j, k);
                if (!g.wet(c)) continue;
                const double pc = p.v[c];
                double s = 0;
                for (int a = 0; a < g.dim; ++a) {
                    const double ih2 = 1.0 / (g.spacing[a] * g.spacing[a]);
                    for (int side = -1; side <= 1; side += 2) {
                        int nb[3] = {i, j, k};
                        nb[a] += side;
                        int w[3] = {nb[0], nb[1], nb[2]};
                        bool inside = lc.wrap(w[0], w[1], w[2]);
                        bool wet = inside && g.wet(lc.idx(w[0], w[1], w[2]));
                        double pn;
                        if (wet)
                            pn = p.v[lc.idx(w[0], w[1], w[2])];
                        else if (dirichlet)
                            pn = -pc;
                        else
                            pn = pc;  // zero flux
                        s += (pc - pn) * ih2;
                    }
                }
                out.v[c] = s;
            }
}

}  // namespace

void apply_neg_laplacian_dirichlet(const ScalarField& p, ScalarField& out) {
    neg_cell_laplacian(p, true, out);
}

void apply_neg_laplacian_neumann(const ScalarField& p, ScalarField& out) {
    neg_cell_laplacian(p, false, out);
}

ScalarField neg_laplacian_dirichlet(const ScalarField& p) {
    ScalarField out(p.geom);
    neg_cell_laplacian(p, true, out);
    return out;
}

ScalarField neg_laplacian_neumann(const ScalarField& p) {
    ScalarField out(p.geom);
    neg_cell_laplacian(p, false, out);
    return out;
}

ScalarField laplacian(const ScalarField& p) {
    ScalarField out = neg_laplacian_dirichlet(p);
    scale(out, -1.0);
    return out;
}

StaggeredField velocity_laplacian(const StaggeredField& u) {
    const auto& g = *u.geom;
    StaggeredField out(u.geom);
    for (int a = 0; a < g.dim; ++a) {
        const Lat la = Lat::faces(g, a);
        const auto fc = g.face_counts(a);
        for (int k = 0; k < fc[2]; ++k)
            for (int j = 0; j < fc[1]; ++j)
                for (int i = 0; i < fc[0]; ++i) {
                    const std::size_t f = g.face_index(a, i, j, k);
                    if (!g.face_active[a][f]) continue;
                    const double uf = u.comp[a][f];
                    double s = 0;
                    for (int b = 0; b < g.dim; ++b) {
                        const double ih2 = 1.0 / (g.spacing[b] * g.spacing[b]);
                        int p1[3] = {i, j, k}, m1[3] = {i, j, k};
                        p1[b] += 1;
                        m1[b] -= 1;
                        s += (la.at(u.comp[a], p1[0], p1[1], p1[2]) - 2.0 * uf +
                              la.at(u.comp[a], m1[0], m1[1], m1[2])) *
                             ih2;
                    }
                    out.comp[a][f] = s;
                }
    }
    return out;
}

namespace {

enum class ConvKind { Skew, Advective };

StaggeredField convective(const StaggeredField& u, ConvKind kind) {
    const auto& g = *u.geom;
    StaggeredField out(u.geom);
    for (int a = 0; a < g.dim; ++a) {
        const Lat la = Lat::faces(g, a);
        const auto fc = g.face_counts(a);
        for (int k = 0; k < fc[2]; ++k)
            for (int j = 0; j < fc[1]; ++j)
                for (int i = 0; i < fc[0]; ++i) {
                    const std::size_t f = g.face_index(a, i, j, k);
                    if (!g.face_active[a][f]) continue;
                    double s = 0;
                    for (int b = 0; b < g.dim; ++b) {
                        const Lat lb = Lat::faces(g, b);
                        const double i2h = 0.5 / g.spacing[b];
                        int p1[3] = {i, j, k}, m1[3] = {i, j, k};
                        p1[b] += 1;
                        m1[b] -= 1;
                        const double up = la.at(u.comp[a], p1[0], p1[1], p1[2]);
                        const double um = la.at(u.comp[a], m1[0], m1[1], m1[2]);
                        const double ubar = interp_component(u, lb, a, b, i, j, k);
                        const double adv = ubar * (up - um) * i2h;
                        if (kind == ConvKind::Advective) {
                            s += adv;
                        } else {
                            const double ubp =
                                interp_component(u, lb, a, b, p1[0], p1[1], p1[2]);
                            const double ubm =
                                interp_component(u, lb, a, b, m1[0], m1[1], m1[2]);
                            const double divform = (ubp * up - ubm * um) * i2h;
                            s += 0.5 * (adv + divform);
                        }
                    }
                    out.comp[a][f] = s;
                }
    }
    return out;
}

}  // namespace

StaggeredField convective_term(const StaggeredField& u) {
    return convective(u, ConvKind::Skew);
}

StaggeredField advective_part(const StaggeredField& u) {
    return convective(u, ConvKind::Advective);
}

StaggeredField divergence_correction(const StaggeredField& u) {
    const auto& g = *u.geom;
    const ScalarField d = divergence(u);
    StaggeredField out(u.geom);
    for (int a = 0; a < g.dim; ++a) {
        const auto fc = g.face_counts(a);
        for (int k = 0; k < fc[2]; ++k)
            for (int j = 0; j < fc[1]; ++j)
                for (int i = 0; i < fc[0]; ++i) {
                    const std::size_t f = g.face_index(a, i, j, k);
                    if (!g.face_active[a][f]) continue;
                    int hi[3] = {i, j, k};
                    int lo[3] = {i, j, k};
                    lo[a] -= 1;
                    if (g.periodic) lo[a] = (lo[a] + g.cells[a]) % g.cells[a];
                    const double davg =
                        0.5 * (d.v[g.cell_index(hi[0], hi[1], hi[2])] +
                               d.v[g.cell_index(lo[0], lo[1], lo[2])]);
                    out.comp[a][f] = 0.5 * davg * u.comp[a][f];
                }
    }
    return out;
}

double dirichlet_energy(const StaggeredField& u) {
    const auto& g = *u.geom;
    double total = 0;
    for (int a = 0; a < g.dim; ++a) {
        const Lat la = Lat::faces(g, a);
        for (int b = 0; b < g.dim; ++b) {
            const double ih2 = 1.0 / (g.spacing[b] * g.spacing[b]);
            // Each b-edge of the axis-a lattice counted once; in the bounded
            // case the range extends one past the end so the zero-extension
            // edges are included.
            int hi[3] = {la.n[0], la.n[1], la.n[2]};
            if (!g.periodic) hi[b] += 1;
            double s = 0;
            for (int k = 0; k < hi[2]; ++k)
                for (int j = 0; j < hi[1]; ++j)
                    for (int i = 0; i < hi[0]; ++i) {
                        int m1[3] = {i, j, k};
                        m1[b] -= 1;
                        const double diff = la.at(u.comp[a], i, j, k) -
                                            la.at(u.comp[a], m1[0], m1[1], m1[2]);
                        s += diff * diff;
                    }
            total += s * ih2;
        }
    }
    return total * g.cell_volume();
}

double inner(const ScalarField& a, const ScalarField& b) {
    require_same_geometry(a.geom, b.geom);
    double s = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s * a.geom->cell_volume();
}

double inner(const StaggeredField& a, const StaggeredField& b) {
    require_same_geometry(a.geom, b.geom);
    double s = 0;
    for (int ax = 0; ax < a.geom->dim; ++ax)
        for (std::size_t i = 0; i < a.comp[ax].size(); ++i)
            s += a.comp[ax][i] * b.comp[ax][i];
    return s * a.geom->cell_volume();
}

}  // namespace acns

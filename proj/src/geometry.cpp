#include "acns/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <stdexcept>

namespace acns {

bool Obstacle::contains(const std::array<double, 3>& x, int dim) const {
    switch (kind) {
        case Kind::None:
            return false;
        case Kind::Disk: {
            double r2 = 0;
            for (int a = 0; a < dim; ++a) {
                const double d = x[a] - center[a];
                r2 += d * d;
            }
            return r2 < radius * radius;
        }
        case Kind::Rect: {
            for (int a = 0; a < dim; ++a)
                if (std::abs(x[a] - center[a]) >= half_extent[a]) return false;
            return true;
        }
    }
    return false;
}

double Obstacle::surface_distance(const std::array<double, 3>& x, int dim) const {
    if (kind == Kind::None) return std::numeric_limits<double>::infinity();
    if (kind == Kind::Disk) {
        double r2 = 0;
        for (int a = 0; a < dim; ++a) {
            const double d = x[a] - center[a];
            r2 += d * d;
        }
        return std::sqrt(r2) - radius;
    }
    // Rect: distance to the box surface (exact outside, negative inside).
    double out2 = 0;
    double max_in = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < dim; ++a) {
        const double d = std::abs(x[a] - center[a]) - half_extent[a];
        if (d > 0) out2 += d * d;
        max_in = std::max(max_in, d);
    }
    return out2 > 0 ? std::sqrt(out2) : max_in;
}

namespace {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

template <typename T>
std::uint64_t fnv1a_value(const T& v, std::uint64_t h) {
    return fnv1a(&v, sizeof(T), h);
}

std::uint64_t geometry_hash(const GeometrySpec& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    h = fnv1a_value(s.dim, h);
    for (int a = 0; a < 3; ++a) h = fnv1a_value(s.cells[a], h);
    for (int a = 0; a < 3; ++a) h = fnv1a_value(s.extent[a], h);
    h = fnv1a_value(static_cast<int>(s.obstacle.kind), h);
    for (int a = 0; a < 3; ++a) h = fnv1a_value(s.obstacle.center[a], h);
    h = fnv1a_value(s.obstacle.radius, h);
    for (int a = 0; a < 3; ++a) h = fnv1a_value(s.obstacle.half_extent[a], h);
    h = fnv1a_value(s.periodic, h);
    return h;
}

}  // namespace

std::shared_ptr<const DomainGeometry> build_domain(const GeometrySpec& spec) {
    if (spec.dim != 2 && spec.dim != 3)
        throw Error("build_domain: dim must be 2 or 3");
    auto g = std::make_shared<DomainGeometry>();
    g->dim = spec.dim;
    g->cells = spec.cells;
    g->extent = spec.extent;
    g->periodic = spec.periodic;
    g->obstacle = spec.obstacle;
    if (spec.dim == 2) {
        g->cells[2] = 1;
        g->extent[2] = 1.0;
    }
    for (int a = 0; a < spec.dim; ++a) {
        if (g->cells[a] < 16)
            throw Error("build_domain: need at least 16 cells per axis");
        if (!(g->extent[a] > 0))
            throw Error("build_domain: box extent must be positive");
        g->spacing[a] = g->extent[a] / g->cells[a];
    }
    g->spacing[2] = spec.dim == 3 ? g->extent[2] / g->cells[2] : 1.0;

    if (spec.periodic && spec.obstacle.kind != Obstacle::Kind::None)
        throw Error("build_domain: periodic boxes do not support obstacles");

    // Margin check: the obstacle must stay at least 4*max(spacing) away from
    // every box face so the far-field truncation stays a controlled
    // approximation.
    if (spec.obstacle.kind != Obstacle::Kind::None) {
        double hmax = 0;
        for (int a = 0; a < spec.dim; ++a) hmax = std::max(hmax, g->spacing[a]);
        const double margin = 4.0 * hmax;
        for (int a = 0; a < spec.dim; ++a) {
            double reach = spec.obstacle.kind == Obstacle::Kind::Disk
                               ? spec.obstacle.radius
                               : spec.obstacle.half_extent[a];
            const double lo = spec.obstacle.center[a] - reach;
            const double hi = spec.obstacle.center[a] + reach;
            if (lo < margin || g->extent[a] - hi < margin)
                throw ObstacleTouchesBox("obstacle closer than 4*max(dx) to box face");
        }
    }

    // Classification: solid by cell-center test, then the boundary tags.
    const int nx = g->cells[0], ny = g->cells[1], nz = g->cells[2];
    g->cell_class.assign(g->ncells(), CellClass::Fluid);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                if (g->obstacle.contains(g->cell_center(i, j, k), g->dim))
                    g->cell_class[g->cell_index(i, j, k)] = CellClass::Solid;
            }

    auto solid_at = [&](int i, int j, int k) {
        if (i < 0 || i >= nx || j < 0 || j >= ny || k < 0 || k >= nz) return false;
        return g->cell_class[g->cell_index(i, j, k)] == CellClass::Solid;
    };

    std::size_t nwet = 0;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const std::size_t c = g->cell_index(i, j, k);
                if (g->cell_class[c] == CellClass::Solid) continue;
                ++nwet;
                if (solid_at(i - 1, j, k) || solid_at(i + 1, j, k) ||
                    solid_at(i, j - 1, k) || solid_at(i, j + 1, k) ||
                    (g->dim == 3 && (solid_at(i, j, k - 1) || solid_at(i, j, k + 1)))) {
                    g->cell_class[c] = CellClass::ObstacleBoundary;
                } else if (!g->periodic &&
                           (i == 0 || i == nx - 1 || j == 0 || j == ny - 1 ||
                            (g->dim == 3 && (k == 0 || k == nz - 1)))) {
                    g->cell_class[c] = CellClass::FarfieldBoundary;
                }
            }
    g->n_wet_ = nwet;
    if (nwet == 0) throw EmptyFluidRegion("no fluid cells in the box");

    // Face activity: a face is evolved only when it separates two wet cells
    // and does not lie on the box boundary.
    for (int a = 0; a < 3; ++a) {
        if (a >= g->dim) {
            g->face_active[a].clear();
            continue;
        }
        g->face_active[a].assign(g->nfaces(a), 0);
        const auto fc = g->face_counts(a);
        for (int k = 0; k < fc[2]; ++k)
            for (int j = 0; j < fc[1]; ++j)
                for (int i = 0; i < fc[0]; ++i) {
                    int ci[3] = {i, j, k};
                    int lo[3] = {i, j, k};
                    lo[a] -= 1;
                    if (!g->periodic && (lo[a] < 0 || ci[a] >= g->cells[a])) continue;
                    if (g->periodic) lo[a] = (lo[a] + g->cells[a]) % g->cells[a];
                    const bool wet_lo = g->wet(g->cell_index(lo[0], lo[1], lo[2]));
                    const bool wet_hi = g->wet(g->cell_index(ci[0], ci[1], ci[2]));
                    if (wet_lo && wet_hi)
                        g->face_active[a][g->face_index(a, i, j, k)] = 1;
                    if (wet_lo != wet_hi) {
                        // wet/solid interface: outward normal points into the solid
                        g->obstacle_faces.push_back(
                            {a, g->face_index(a, i, j, k), wet_lo ? +1 : -1});
                    }
                }
    }

    // Connectivity: every wet cell must reach the far-field ring.
    if (!g->periodic) {
        std::vector<std::uint8_t> seen(g->ncells(), 0);
        std::deque<std::size_t> queue;
        for (std::size_t c = 0; c < g->ncells(); ++c)
            if (g->cell_class[c] == CellClass::FarfieldBoundary) {
                seen[c] = 1;
                queue.push_back(c);
            }
        const std::size_t sx = 1, sy = nx, sz = std::size_t(nx) * ny;
        while (!queue.empty()) {
            const std::size_t c = queue.front();
            queue.pop_front();
            const int i = int(c % nx), j = int((c / nx) % ny), k = int(c / sz);
            auto visit = [&](int ii, int jj, int kk, std::size_t cc) {
                if (ii < 0 || ii >= nx || jj < 0 || jj >= ny || kk < 0 || kk >= nz) return;
                if (!seen[cc] && g->wet(cc)) {
                    seen[cc] = 1;
                    queue.push_back(cc);
                }
            };
            visit(i - 1, j, k, c - sx);
            visit(i + 1, j, k, c + sx);
            visit(i, j - 1, k, c - sy);
            visit(i, j + 1, k, c + sy);
            if (g->dim == 3) {
                visit(i, j, k - 1, c - sz);
                visit(i, j, k + 1, c + sz);
            }
        }
        for (std::size_t c = 0; c < g->ncells(); ++c)
            if (g->wet(c) && !seen[c])
                throw DisconnectedFluidRegion("wet cell not connected to far field");
    }

    g->hash = geometry_hash(spec);
    return g;
}

}  // namespace acns

#include "acns/initial_data.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "acns/errors.hpp"
#include "acns/hodge.hpp"
#include "acns/norms.hpp"
#include "acns/operators.hpp"
#include "acns/snapshot_io.hpp"

namespace acns {

namespace {

// Velocity from a node-sampled stream function: u_x = d(psi)/dy,
// u_y = -d(psi)/dx differenced between the face's end nodes. The MAC
// divergence of such a field telescopes to exactly zero, so the later
// projection only has to clean up the pinned-face truncation.
StaggeredField curl_of_stream(const GeometryPtr& geom,
                              const std::function<double(double, double)>& psi) {
    const auto& g = *geom;
    StaggeredField u(geom);
    const double dx = g.spacing[0], dy = g.spacing[1];
    for (int kz = 0; kz < g.cells[2]; ++kz) {
        // x-faces: nodes above/below the face midpoint
        auto fc0 = g.face_counts(0);
        for (int j = 0; j < fc0[1]; ++j)
            for (int i = 0; i < fc0[0]; ++i) {
                const double x = i * dx;
                u.comp[0][g.face_index(0, i, j, kz)] =
                    (psi(x, (j + 1) * dy) - psi(x, j * dy)) / dy;
            }
        auto fc1 = g.face_counts(1);
        for (int j = 0; j < fc1[1]; ++j)
            for (int i = 0; i < fc1[0]; ++i) {
                const double y = j * dy;
                u.comp[1][g.face_index(1, i, j, kz)] =
                    -(psi((i + 1) * dx, y) - psi(i * dx, y)) / dx;
            }
    }
    return u;
}

double uniform_pm1(std::mt19937_64& rng) {
    // exact arithmetic on the engine output keeps this bit-reproducible
    return 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

StaggeredField make_initial_velocity(const InitialDataSpec& spec, const GeometryPtr& geom,
                                     double elliptic_tol) {
    const auto& g = *geom;
    StaggeredField u(geom);

    switch (spec.kind) {
        case InitialDataSpec::Kind::Zero:
            return u;

        case InitialDataSpec::Kind::TaylorGreenLike: {
            const double lx = g.extent[0], ly = g.extent[1];
            u = curl_of_stream(geom, [&](double x, double y) {
                return (ly / M_PI) * std::sin(M_PI * x / lx) * std::sin(M_PI * y / ly);
            });
            break;
        }

        case InitialDataSpec::Kind::RandomSolenoidal: {
            const double lx = g.extent[0], ly = g.extent[1];
            std::mt19937_64 rng(spec.seed);
            const int kmax = std::max(1, spec.max_mode);
            std::vector<double> amp(std::size_t(kmax) * kmax);
            for (int kx = 1; kx <= kmax; ++kx)
                for (int ky = 1; ky <= kmax; ++ky)
                    amp[(kx - 1) * kmax + (ky - 1)] =
                        uniform_pm1(rng) *
                        std::pow(double(kx * kx + ky * ky), -spec.spectral_decay);
            u = curl_of_stream(geom, [&](double x, double y) {
                double s = 0;
                for (int kx = 1; kx <= kmax; ++kx)
                    for (int ky = 1; ky <= kmax; ++ky)
                        s += amp[(kx - 1) * kmax + (ky - 1)] *
                             std::sin(kx * M_PI * x / lx) * std::sin(ky * M_PI * y / ly);
                return s;
            });
            break;
        }

        case InitialDataSpec::Kind::File: {
            auto snap = read_state_snapshot(spec.path, geom);
            if (snap.header.kind == SnapshotKind::Scalar)
                throw BadInitialData("initial-data file holds no velocity");
            u = snap.u;
            if (!all_finite(u)) throw BadInitialData("initial velocity has NaN/Inf");
            enforce_pinned_faces(u);
            return u;  // file data is taken as-is, no projection or rescale
        }
    }

    enforce_pinned_faces(u);
    u = leray_decompose(u, elliptic_tol).solenoidal;
    const double n2 = lp_norm(u, 2.0);
    if (n2 > 0) scale(u, spec.amplitude / n2);
    return u;
}

ScalarField make_initial_pressure(const InitialDataSpec& spec, const GeometryPtr& geom) {
    if (spec.kind == InitialDataSpec::Kind::File) {
        auto snap = read_state_snapshot(spec.path, geom);
        if (snap.header.kind == SnapshotKind::State) {
            if (!all_finite(snap.p)) throw BadInitialData("initial pressure has NaN/Inf");
            ScalarField p = snap.p;
            enforce_solid_zero(p);
            return p;
        }
    }
    return ScalarField(geom);
}

}  // namespace acns

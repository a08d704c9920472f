#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acns/errors.hpp"
#include "acns/norms.hpp"
#include "acns/ns_reference.hpp"
#include "acns/operators.hpp"
#include "support/test_support.hpp"

using namespace acns;
using namespace acns::test;

namespace {

// Node-differenced stream function: discretely divergence-free everywhere,
// including the periodic wrap.
StaggeredField stream_velocity(const GeometryPtr& geom,
                               const std::function<double(double, double)>& psi) {
    const auto& g = *geom;
    StaggeredField u(geom);
    const double dx = g.spacing[0], dy = g.spacing[1];
    auto fc0 = g.face_counts(0);
    for (int j = 0; j < fc0[1]; ++j)
        for (int i = 0; i < fc0[0]; ++i)
            u.comp[0][g.face_index(0, i, j)] =
                (psi(i * dx, (j + 1) * dy) - psi(i * dx, j * dy)) / dy;
    auto fc1 = g.face_counts(1);
    for (int j = 0; j < fc1[1]; ++j)
        for (int i = 0; i < fc1[0]; ++i)
            u.comp[1][g.face_index(1, i, j)] =
                -(psi((i + 1) * dx, j * dy) - psi(i * dx, j * dy)) / dx;
    return u;
}

}  // namespace

TEST_CASE("zero state stays zero") {
    GeometrySpec gs;
    gs.dim = 2;
    gs.cells = {32, 32, 1};
    gs.extent = {2, 2, 1};
    auto geom = build_domain(gs);
    SimConfig cfg;
    cfg.geometry = gs;
    cfg.initial.kind = InitialDataSpec::Kind::Zero;
    cfg.t_end = 0.005;
    RunResult rr = ns_run(cfg, geom);
    CHECK(lp_norm(rr.trajectory.snaps.back().u, INFINITY) == 0.0);
}

TEST_CASE("taylor-green on the periodic box: closed-form energy decay within 2%") {
    GeometrySpec gs;
    gs.dim = 2;
    gs.cells = {64, 64, 1};
    gs.extent = {2, 2, 1};
    gs.periodic = true;
    auto geom = build_domain(gs);

    SimConfig cfg;
    cfg.geometry = gs;
    cfg.mu = 0.1;
    cfg.t_end = 0.1;
    cfg.initial.kind = InitialDataSpec::Kind::Zero;  // replaced below
    cfg.snapshot_cadence = 1 << 20;                  // endpoints only

    // integrate manually to control the initial state exactly
    SimState s;
    s.u = stream_velocity(geom, [](double x, double y) {
        return (1.0 / M_PI) * std::sin(M_PI * x) * std::sin(M_PI * y);
    });
    s.p = ScalarField(geom);
    s.p_prev = s.p;
    const double e0 = 0.5 * inner(s.u, s.u);

    const double limit = stable_dt(cfg, *geom, lp_norm(s.u, INFINITY));
    const long n = long(std::ceil(cfg.t_end / limit));
    cfg.dt = cfg.t_end / double(n);
    for (long k = 0; k < n; ++k) s = ns_step(s, cfg, e0);

    const double eT = 0.5 * inner(s.u, s.u);
    const double expect = e0 * std::exp(-4.0 * M_PI * M_PI * cfg.mu * cfg.t_end);
    CHECK(std::abs(eT - expect) < 0.02 * expect);
}

TEST_CASE("projection keeps the velocity divergence-free and the energy inequality") {
    GeometrySpec gs;
    gs.dim = 2;
    gs.cells = {32, 32, 1};
    gs.extent = {2, 2, 1};
    gs.obstacle.kind = Obstacle::Kind::Disk;
    gs.obstacle.center = {0.8, 1.1, 0};
    gs.obstacle.radius = 0.25;
    auto geom = build_domain(gs);
    SimConfig cfg;
    cfg.geometry = gs;
    cfg.t_end = 0.01;
    cfg.initial.kind = InitialDataSpec::Kind::RandomSolenoidal;
    cfg.initial.seed = 11;
    RunResult rr = ns_run(cfg, geom);
    for (const auto& snap : rr.trajectory.snaps)
        CHECK(lp_norm(divergence(snap.u), 2.0) <= 1e-6);
    // energy inequality with an O(dt) slack
    const auto& last = rr.ledger.rows.back();
    CHECK(last.energy + last.dissipation_cum <=
          rr.ledger.rows.front().energy + 50.0 * rr.trajectory.dt);
}

TEST_CASE("limit pressure: zero input, zero mean, spectral oracle") {
    GeometrySpec gs;
    gs.dim = 2;
    gs.cells = {48, 48, 1};
    gs.extent = {2, 2, 1};
    auto geom = build_domain(gs);

    CHECK(lp_norm(limit_pressure(StaggeredField(geom)), INFINITY) == 0.0);

    // solenoidal shear-like field from a smooth stream function
    StaggeredField u = stream_velocity(geom, [](double x, double y) {
        return 0.3 * std::sin(M_PI * x / 2) * std::sin(M_PI * y / 2) +
               0.1 * std::sin(M_PI * x) * std::sin(M_PI * y / 2);
    });
    enforce_pinned_faces(u);
    const ScalarField p = limit_pressure(u, 1e-10);

    double mean = 0;
    for (double v : p.v) mean += v;
    CHECK(std::abs(mean / double(p.v.size())) < 1e-10);

    // independent spectral route: cosine modes diagonalize the flux-form
    // Neumann Laplacian on the no-obstacle box exactly
    const ScalarField rhs = divergence(convective_term(u));
    ScalarField expect(geom);
    const int n = gs.cells[0];
    for (int kx = 0; kx < 12; ++kx)
        for (int ky = 0; ky < 12; ++ky) {
            if (kx == 0 && ky == 0) continue;
            ScalarField mode = cosine_mode(geom, kx, ky);
            const double m2 = inner(mode, mode);
            const double lam = dirichlet_eigenvalue_1d(kx, n, geom->spacing[0]) +
                               dirichlet_eigenvalue_1d(ky, n, geom->spacing[1]);
            const double coef = inner(mode, rhs) / m2;
            axpy(-coef / lam, mode, expect);  // lap(phi) = rhs
        }
    // compare on the low-mode content: project difference onto the modes used
    double err = 0, ref = 0;
    for (int kx = 0; kx < 12; ++kx)
        for (int ky = 0; ky < 12; ++ky) {
            if (kx == 0 && ky == 0) continue;
            ScalarField mode = cosine_mode(geom, kx, ky);
            const double m2 = inner(mode, mode);
            const double a = inner(mode, p) / std::sqrt(m2);
            const double b = inner(mode, expect) / std::sqrt(m2);
            err += (a - b) * (a - b);
            ref += b * b;
        }
    CHECK(std::sqrt(err) <= 1e-8 * std::max(1.0, std::sqrt(ref)));
}

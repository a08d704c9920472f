#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acns/diagnostics.hpp"
#include "acns/errors.hpp"
#include "acns/hodge.hpp"
#include "acns/norms.hpp"
#include "acns/operators.hpp"
#include "support/test_support.hpp"

using namespace acns;
using namespace acns::test;

namespace {

Trajectory make_traj(const GeometryPtr& geom, std::vector<Snapshot> snaps, double snap_dt) {
    Trajectory t;
    t.geom = geom;
    t.epsilon = 1e-2;
    t.dt = snap_dt;
    t.snap_dt = snap_dt;
    t.snaps = std::move(snaps);
    return t;
}

}  // namespace

TEST_CASE("energy ledger: zero trajectory and the pure-pressure formula") {
    auto g = disk_box(32, 2.0, 0.8, 1.1, 0.25);
    std::vector<Snapshot> snaps;
    for (int i = 0; i < 3; ++i)
        snaps.push_back({0.1 * i, StaggeredField(g), ScalarField(g)});
    Trajectory zero = make_traj(g, snaps, 0.1);
    EnergyLedger led = energy_ledger(zero, 1e-2, 1.0);
    for (const auto& r : led.rows) {
        CHECK(r.energy == 0.0);
        CHECK(r.residual == 0.0);
    }

    // u = 0, p = const: E = (eps/2)|p|^2 exactly
    ScalarField p(g);
    for (std::size_t c = 0; c < p.v.size(); ++c)
        if (g->wet(c)) p.v[c] = 2.0;
    Trajectory pure = make_traj(g, {{0.0, StaggeredField(g), p}}, 0.1);
    const double eps = 0.25;
    EnergyLedger led2 = energy_ledger(pure, eps, 1.0);
    const double expect = 0.5 * eps * 4.0 * double(g->wet_count()) * g->cell_volume();
    CHECK(led2.rows.front().energy == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("a priori bounds: zeros and homogeneity degrees") {
    auto g = disk_box(32, 2.0, 0.8, 1.1, 0.25);
    const SpectralBasis basis = dirichlet_eigenbasis(g, 12);

    std::vector<Snapshot> zsnaps;
    for (int i = 0; i < 3; ++i)
        zsnaps.push_back({0.1 * i, StaggeredField(g), ScalarField(g)});
    BoundsReport z = apriori_bounds(make_traj(g, zsnaps, 0.1), 1e-2, basis);
    CHECK(z.grad_u_l2_l2 == 0.0);
    CHECK(z.conv_l1_l32 == 0.0);
    CHECK(z.u_linf_l2 == 0.0);

    std::vector<Snapshot> snaps, snaps2;
    for (int i = 0; i < 4; ++i) {
        StaggeredField u = random_bc1_velocity(g, 100 + i);
        StaggeredField u2 = u;
        scale(u2, 2.0);
        ScalarField p = random_rough_scalar(g, 200 + i);
        snaps.push_back({0.05 * i, u, p});
        snaps2.push_back({0.05 * i, u2, p});
    }
    BoundsReport a = apriori_bounds(make_traj(g, snaps, 0.05), 1e-2, basis);
    BoundsReport b = apriori_bounds(make_traj(g, snaps2, 0.05), 1e-2, basis);
    CHECK(b.grad_u_l2_l2 == doctest::Approx(2.0 * a.grad_u_l2_l2).epsilon(1e-12));
    CHECK(b.u_linf_l2 == doctest::Approx(2.0 * a.u_linf_l2).epsilon(1e-12));
    CHECK(b.conv_l2_l1 == doctest::Approx(4.0 * a.conv_l2_l1).epsilon(1e-12));
    CHECK(b.conv_l1_l32 == doctest::Approx(4.0 * a.conv_l1_l32).epsilon(1e-12));
    CHECK(b.divu_u_l2_l1 == doctest::Approx(4.0 * a.divu_u_l2_l1).epsilon(1e-12));

    // independently scripted check of one entry
    std::vector<double> grads;
    for (const auto& s : snaps) grads.push_back(std::sqrt(dirichlet_energy(s.u)));
    double acc = 0;
    for (std::size_t i = 0; i < grads.size(); ++i) {
        const double w = (i == 0 || i + 1 == grads.size()) ? 0.025 : 0.05;
        acc += w * grads[i] * grads[i];
    }
    CHECK(a.grad_u_l2_l2 == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
}

TEST_CASE("q_decay: solenoidal data gives nothing, gradient data gives everything") {
    auto g = disk_box(32, 2.0, 0.8, 1.1, 0.25);

    std::vector<Snapshot> sol, grad;
    std::vector<double> grad_lp;
    for (int i = 0; i < 3; ++i) {
        const LerayPair pair = leray_decompose(random_bc1_velocity(g, 300 + i));
        sol.push_back({0.1 * i, pair.solenoidal, ScalarField(g)});
        grad.push_back({0.1 * i, pair.gradient_part, ScalarField(g)});
        grad_lp.push_back(lp_norm(pair.gradient_part, 4.0));
    }
    const double qs = q_decay(make_traj(g, sol, 0.1), 4.0);
    CHECK(qs <= 1e-6 * std::sqrt(0.2) * 10);

    const double qg = q_decay(make_traj(g, grad, 0.1), 4.0);
    const double expect = space_time_norm(grad_lp, 0.1, 2.0);
    CHECK(qg == doctest::Approx(expect).epsilon(1e-4));

    CHECK_THROWS_AS(q_decay(make_traj(g, sol, 0.1), 3.0), BadExponent);
    CHECK_THROWS_AS(q_decay(make_traj(g, sol, 0.1), 6.0), BadExponent);
}

TEST_CASE("time modulus: trivial cases and the linear-ramp closed form") {
    auto g = disk_box(32, 2.0, 0.8, 1.1, 0.25);
    const LerayPair pair = leray_decompose(random_bc1_velocity(g, 40));
    const StaggeredField w = pair.solenoidal;

    // Pu(t) = t*w over t in [0,1], 11 snapshots
    std::vector<Snapshot> snaps;
    for (int i = 0; i <= 10; ++i) {
        StaggeredField u = w;
        scale(u, 0.1 * i);
        snaps.push_back({0.1 * i, u, ScalarField(g)});
    }
    Trajectory traj = make_traj(g, snaps, 0.1);
    DecomposedTrajectory dec = decompose_trajectory(traj);

    CHECK(time_modulus(dec, 0.0) == 0.0);

    const double h = 0.3;
    const double got = time_modulus(dec, h);
    const double expect = h * lp_norm(w, 2.0) * std::sqrt(1.0 - h);
    CHECK(got == doctest::Approx(expect).epsilon(1e-6));

    // constant trajectory
    std::vector<Snapshot> csnaps;
    for (int i = 0; i <= 5; ++i) csnaps.push_back({0.1 * i, w, ScalarField(g)});
    Trajectory ctraj = make_traj(g, csnaps, 0.1);
    DecomposedTrajectory cdec = decompose_trajectory(ctraj);
    CHECK(time_modulus(cdec, 0.2) <= 1e-10);

    CHECK_THROWS_AS(time_modulus(dec, 1.0), OffsetTooLarge);
    CHECK_THROWS_AS(time_modulus(dec, 0.05), OffsetTooLarge);  // not a multiple
}

TEST_CASE("local window hugs the obstacle") {
    auto g = disk_box(64, 4.0, 1.0, 2.0, 0.3);
    const auto mask = local_window_mask(*g);
    std::size_t count = 0;
    for (int j = 0; j < 64; ++j)
        for (int i = 0; i < 64; ++i) {
            const std::size_t c = g->cell_index(i, j);
            if (!mask[c]) continue;
            ++count;
            const auto x = g->cell_center(i, j);
            CHECK(g->obstacle.surface_distance(x, 2) <= 1.0 + 1e-12);
            CHECK(g->wet(c));
        }
    CHECK(count > 0);

    auto g2 = unit_box(32);
    const auto mask2 = local_window_mask(*g2);
    for (std::size_t c = 0; c < mask2.size(); ++c) CHECK(mask2[c] == 1);
}

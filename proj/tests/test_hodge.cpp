#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acns/hodge.hpp"
#include "acns/norms.hpp"
#include "acns/operators.hpp"
#include "support/test_support.hpp"

using namespace acns;
using namespace acns::test;

namespace {
constexpr double kTolProj = 1e-7;  // 10x the elliptic default
}

TEST_CASE("decomposition is exact: Pu + Qu = u, and Qu = grad(potential)") {
    auto g = disk_box(32, 2.0, 0.8, 1.1, 0.25);
    const StaggeredField u = random_bc1_velocity(g, 1);
    const LerayPair pair = leray_decompose(u);
    for (int a = 0; a < 2; ++a)
        for (std::size_t f = 0; f < u.comp[a].size(); ++f)
            CHECK(pair.solenoidal.comp[a][f] + pair.gradient_part.comp[a][f] ==
                  doctest::Approx(u.comp[a][f]).epsilon(1e-14));
    const StaggeredField gp = gradient(pair.potential);
    for (int a = 0; a < 2; ++a)
        for (std::size_t f = 0; f < u.comp[a].size(); ++f)
            CHECK(pair.gradient_part.comp[a][f] == gp.comp[a][f]);
}

TEST_CASE("P leaves divergence-free fields, kills gradients") {
    auto g = disk_box(32, 2.0, 0.8, 1.1, 0.25);
    const StaggeredField u = random_bc1_velocity(g, 2);
    const LerayPair pair = leray_decompose(u);
    const double un = lp_norm(u, 2.0);

    // div Pu small
    CHECK(lp_norm(divergence(pair.solenoidal), 2.0) <= kTolProj * std::max(un, 1.0));

    // P on its own range is the identity
    const LerayPair again = leray_decompose(pair.solenoidal);
    StaggeredField diff = again.solenoidal;
    axpy(-1.0, pair.solenoidal, diff);
    CHECK(lp_norm(diff, 2.0) <= 2 * kTolProj * std::max(un, 1.0));
    CHECK(lp_norm(again.gradient_part, 2.0) <= 2 * kTolProj * std::max(un, 1.0));

    // P kills gradient fields built through the same solver
    ScalarField rhs = random_rough_scalar(g, 3);
    PoissonOptions opt;
    opt.remove_mean_rhs = true;
    const ScalarField phi = solve_poisson_neumann(rhs, opt);
    const StaggeredField grad_phi = gradient(phi);
    const LerayPair gp = leray_decompose(grad_phi);
    CHECK(lp_norm(gp.solenoidal, 2.0) <= kTolProj * std::max(lp_norm(grad_phi, 2.0), 1.0));
}

TEST_CASE("projector algebra and orthogonality on random fields") {
    auto g = disk_box(32, 2.0, 0.8, 1.1, 0.25);
    for (std::uint64_t seed = 10; seed < 20; ++seed) {
        const StaggeredField u = random_bc1_velocity(g, seed);
        const double un = lp_norm(u, 2.0);
        const LerayPair pair = leray_decompose(u);

        // L2 orthogonality <Pu, Qu> ~ 0
        CHECK(std::abs(inner(pair.solenoidal, pair.gradient_part)) <=
              kTolProj * un * un);

        // |Pu| <= |u| + tol
        CHECK(lp_norm(pair.solenoidal, 2.0) <= un + kTolProj);

        // Q is a projection: Q(Qu) = Qu
        const LerayPair qq = leray_decompose(pair.gradient_part);
        StaggeredField dq = qq.gradient_part;
        axpy(-1.0, pair.gradient_part, dq);
        CHECK(lp_norm(dq, 2.0) <= 2 * kTolProj * std::max(un, 1.0));
    }
}

TEST_CASE("normal trace of Pu on obstacle faces is exactly zero") {
    auto g = disk_box(32, 2.0, 0.8, 1.1, 0.25);
    const StaggeredField u = random_bc1_velocity(g, 30);
    const LerayPair pair = leray_decompose(u);
    for (const auto& face : g->obstacle_faces)
        CHECK(pair.solenoidal.comp[face.axis][face.face] == 0.0);
}

TEST_CASE("measured L4 boundedness ratio of P stays moderate (recorded)") {
    auto g = disk_box(32, 2.0, 0.8, 1.1, 0.25);
    double worst = 0;
    for (std::uint64_t seed = 50; seed < 58; ++seed) {
        const StaggeredField u = random_bc1_velocity(g, seed);
        const LerayPair pair = leray_decompose(u);
        worst = std::max(worst, lp_norm(pair.solenoidal, 4.0) / lp_norm(u, 4.0));
    }
    MESSAGE("measured sup |Pu|_4 / |u|_4 over corpus: ", worst);
    CHECK(worst < 10.0);  // sanity ceiling, not the theoretical constant
}

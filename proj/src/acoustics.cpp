#include "acns/acoustics.hpp"

#include <cmath>

#include "acns/errors.hpp"
#include "acns/norms.hpp"
#include "acns/operators.hpp"

namespace acns {

AcousticFields rescale(const Trajectory& traj, double epsilon) {
    if (!(epsilon > 0)) throw Error("rescale needs epsilon > 0");
    AcousticFields f;
    f.traj = &traj;
    f.epsilon = epsilon;
    const std::size_t n = traj.snaps.size();
    if (n >= 2) {
        const double dt = traj.snaps[1].time - traj.snaps[0].time;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double step = traj.snaps[i + 1].time - traj.snaps[i].time;
            if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
                throw NonuniformCadence("snapshots are not uniformly spaced");
        }
        f.dtau = dt / std::sqrt(epsilon);
    }
    f.tau.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        f.tau[i] = traj.snaps[i].time / std::sqrt(epsilon);
    return f;
}

namespace {

// dp/dt taken algebraically from the pressure equation, -(1/eps) div u.
ScalarField pressure_rate(const Snapshot& snap, double epsilon) {
    ScalarField rate = divergence(snap.u);
    scale(rate, -1.0 / epsilon);
    return rate;
}

}  // namespace

AcousticSeries spectral_series(const AcousticFields& fields, const SpectralBasis& basis) {
    AcousticSeries s;
    const auto& snaps = fields.traj->snaps;
    s.p_hat.reserve(snaps.size());
    s.divu_hat.reserve(snaps.size());
    s.divN_hat.reserve(snaps.size());
    for (const auto& snap : snaps) {
        s.p_hat.push_back(basis.coefficients(snap.p));
        s.divu_hat.push_back(basis.coefficients(divergence(snap.u)));
        s.divN_hat.push_back(basis.coefficients(divergence(convective_term(snap.u))));
    }
    return s;
}

std::vector<double> wave_residual(const AcousticFields& fields, const AcousticSeries& series,
                                  const SpectralBasis& basis) {
    const std::size_t n = series.p_hat.size();
    if (n < 3) throw InsufficientSnapshots("wave residual needs at least 3 snapshots");
    const double dtau = fields.dtau;
    std::vector<double> out;
    out.reserve(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double s = 0;
        for (int j = 0; j < basis.rank; ++j) {
            const double lam = basis.eigenvalue[j];
            const double dtt =
                (series.p_hat[i + 1][j] - 2.0 * series.p_hat[i][j] + series.p_hat[i - 1][j]) /
                (dtau * dtau);
            const double r = dtt + lam * series.p_hat[i][j] - lam * series.divu_hat[i][j] -
                             series.divN_hat[i][j];
            s += r * r / (lam * lam);
        }
        out.push_back(std::sqrt(s));
    }
    return out;
}

std::vector<double> wave_residual(const AcousticFields& fields, const SpectralBasis& basis) {
    return wave_residual(fields, spectral_series(fields, basis), basis);
}

void split_pressure(AcousticFields& fields, const AcousticSeries& series,
                    const SpectralBasis& basis) {
    const auto& g = *fields.traj->geom;
    const std::size_t n = series.p_hat.size();
    if (n < 2) throw InsufficientSnapshots("split_pressure needs at least 2 snapshots");
    double hmin = g.spacing[0];
    for (int a = 1; a < g.dim; ++a) hmin = std::min(hmin, g.spacing[a]);
    if (fields.dtau > 0.5 * hmin)
        throw CFLViolation("acoustic tau step exceeds 0.5 min(dx)");

    const int K = basis.rank;
    const double dtau = fields.dtau;
    const double sqeps = std::sqrt(fields.epsilon);

    fields.q1_hat.assign(n, std::vector<double>(K, 0.0));
    fields.q2_hat.assign(n, std::vector<double>(K, 0.0));
    fields.p1_hat.assign(n, std::vector<double>(K, 0.0));
    fields.p2_hat.assign(n, std::vector<double>(K, 0.0));
    fields.defect_wm22.assign(n, 0.0);

    const auto rate0_hat =
        basis.coefficients(pressure_rate(fields.traj->snaps.front(), fields.epsilon));

    for (int j = 0; j < K; ++j) {
        const double lam = basis.eigenvalue[j];
        const double rlam = std::sqrt(lam);
        // forcings: F1 = -div(u), F2 = (-lap)^{-1/2} div(N)
        auto f1 = [&](std::size_t i) { return -series.divu_hat[i][j]; };
        auto f2 = [&](std::size_t i) { return series.divN_hat[i][j] / rlam; };

        // q1: zero data; q2 carries the full pressure data, with the tau
        // velocity taken from the pressure equation at t = 0:
        // d(p~)/dtau(0) = -div(u0)/sqrt(eps).
        double q1m = 0.0;
        double q2m = series.p_hat[0][j] / rlam;
        const double q2dot0 = rate0_hat[j] * sqeps / rlam;
        fields.q1_hat[0][j] = q1m;
        fields.q2_hat[0][j] = q2m;
        double q1 = q1m + 0.5 * dtau * dtau * (-lam * q1m + f1(0));
        double q2 = q2m + dtau * q2dot0 + 0.5 * dtau * dtau * (-lam * q2m + f2(0));
        if (n > 1) {
            fields.q1_hat[1][j] = q1;
            fields.q2_hat[1][j] = q2;
        }
        for (std::size_t i = 2; i < n; ++i) {
            const double q1n = 2.0 * q1 - q1m + dtau * dtau * (-lam * q1 + f1(i - 1));
            const double q2n = 2.0 * q2 - q2m + dtau * dtau * (-lam * q2 + f2(i - 1));
            q1m = q1;
            q2m = q2;
            q1 = q1n;
            q2 = q2n;
            fields.q1_hat[i][j] = q1;
            fields.q2_hat[i][j] = q2;
        }
        for (std::size_t i = 0; i < n; ++i) {
            fields.p1_hat[i][j] = -lam * fields.q1_hat[i][j];  // p1 = lap(q1)
            fields.p2_hat[i][j] = rlam * fields.q2_hat[i][j];  // p2 = sqrt(-lap)(q2)
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < K; ++j) {
            const double d =
                series.p_hat[i][j] - fields.p1_hat[i][j] - fields.p2_hat[i][j];
            const double lam = basis.eigenvalue[j];
            s += d * d / (lam * lam);
        }
        fields.defect_wm22[i] = std::sqrt(s);
    }
}

StrichartzRow strichartz_functional(const Trajectory& traj, double epsilon,
                                    const SpectralBasis& basis) {
    StrichartzRow row;
    const auto& snaps = traj.snaps;
    if (snaps.empty()) return row;
    const double dt = traj.snap_dt;
    const double T = traj.horizon();

    std::vector<double> p_w24(snaps.size()), dp_w34(snaps.size()), conv_l32(snaps.size()),
        divu_l2(snaps.size());
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const auto p_hat = basis.coefficients(snaps[i].p);
        p_w24[i] = lp_norm(basis.synthesize(p_hat, -1.0), 4.0);
        const ScalarField divu = divergence(snaps[i].u);
        const auto dp_hat = basis.coefficients(pressure_rate(snaps[i], epsilon));
        dp_w34[i] = lp_norm(basis.synthesize(dp_hat, -1.5), 4.0);
        conv_l32[i] = lp_norm(convective_term(snaps[i].u), 1.5);
        divu_l2[i] = lp_norm(divu, 2.0);
    }
    row.lhs = std::pow(epsilon, 3.0 / 8.0) * space_time_norm(p_w24, dt, 4.0) +
              std::pow(epsilon, 7.0 / 8.0) * space_time_norm(dp_w34, dt, 4.0);

    const double p0_l2 = lp_norm(snaps.front().p, 2.0);
    const auto divu0_hat = basis.coefficients(divergence(snaps.front().u));
    double divu0_hm1 = 0;
    for (int j = 0; j < basis.rank; ++j)
        divu0_hm1 += divu0_hat[j] * divu0_hat[j] / basis.eigenvalue[j];
    divu0_hm1 = std::sqrt(divu0_hm1);
    row.rhs = std::sqrt(epsilon) * p0_l2 + divu0_hm1 +
              space_time_norm(conv_l32, dt, 1.0) +
              std::sqrt(T) * space_time_norm(divu_l2, dt, 2.0);

    row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
    return row;
}

}  // namespace acns
